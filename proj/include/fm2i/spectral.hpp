#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fm2i {

/// Temporal autocorrelation gamma(0..n) of a series of length n+1,
/// gamma(i) = (1/(n+1)) * sum_{k=i..n} s[k]*s[k-i].
struct AutocorrVector {
    std::vector<double> gamma;

    int lags() const { return static_cast<int>(gamma.size()); }
};

AutocorrVector autocorr(std::span<const double> s);

/// Discrete average power (1/(n+1)) * sum |s[k]|^2; equals gamma(0).
double avg_power(std::span<const double> s);

struct PowerSpectrum {
    std::vector<double> density; // one non-negative entry per DFT bin
};

/// |DFT(s)|^2 / (n+1) over the finite window; density has n+1 bins.
PowerSpectrum psd(std::span<const double> s);

/// Circular-lag autocorrelation c(tau) = (1/N) sum_k s[k]*s[(k-tau) mod N].
/// Used by the Wiener-Khinchin self-test; the forecasting path uses the
/// linear-lag autocorr above.
std::vector<double> circular_autocorr(std::span<const double> s);

/// Max |DFT(circular_autocorr(s)) - psd(s)| over all bins. The identity is
/// exact in the circular convention, so the residual is a numerical self-test.
double wiener_khinchin_residual(std::span<const double> s);

/// DFT of arbitrary length (radix-2 when possible, Bluestein otherwise).
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> in, bool inverse = false);
std::vector<std::complex<double>> dft_real(std::span<const double> in);

} // namespace fm2i
