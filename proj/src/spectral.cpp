#include "fm2i/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fm2i {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative Cooley-Tukey, in place, size must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

// Bluestein's chirp-z transform: arbitrary-N DFT via a power-of-two FFT.
std::vector<std::complex<double>> bluestein(std::span<const std::complex<double>> in) {
    const std::size_t n = in.size();
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;

    std::vector<std::complex<double>> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the phase argument small for long inputs
        const long long q = static_cast<long long>(k) * static_cast<long long>(k) %
                            (2LL * static_cast<long long>(n));
        const double ang = -kPi * static_cast<double>(q) / static_cast<double>(n);
        chirp[k] = {std::cos(ang), std::sin(ang)};
    }

    std::vector<std::complex<double>> a(m), b(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = in[k] * chirp[k];
    b[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k)
        b[k] = b[m - k] = std::conj(chirp[k]);

    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_pow2(a, true);

    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k];
    return out;
}

} // namespace

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> in, bool inverse) {
    if (in.empty()) return {};
    if (!inverse) {
        if (is_pow2(in.size())) {
            std::vector<std::complex<double>> a(in.begin(), in.end());
            fft_pow2(a, false);
            return a;
        }
        return bluestein(in);
    }
    // inverse = conj(forward(conj(x))) / N
    std::vector<std::complex<double>> tmp(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) tmp[i] = std::conj(in[i]);
    auto fwd = dft(tmp, false);
    for (auto& x : fwd) x = std::conj(x) / static_cast<double>(in.size());
    return fwd;
}

std::vector<std::complex<double>> dft_real(std::span<const double> in) {
    std::vector<std::complex<double>> tmp(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) tmp[i] = {in[i], 0.0};
    return dft(tmp, false);
}

AutocorrVector autocorr(std::span<const double> s) {
    if (s.empty())
        throw std::invalid_argument("autocorr: empty series");
    const int n1 = static_cast<int>(s.size());
    AutocorrVector out;
    out.gamma.resize(n1);
    double* g = out.gamma.data();
#pragma omp parallel for schedule(static) if (n1 >= 256)
    for (int i = 0; i < n1; ++i) {
        double sum = 0.0;
        for (int k = i; k < n1; ++k)
            sum += s[k] * s[k - i];
        g[i] = sum / n1;
    }
    return out;
}

double avg_power(std::span<const double> s) {
    if (s.empty())
        throw std::invalid_argument("avg_power: empty series");
    // Same summation order as autocorr's lag 0 so the two agree exactly.
    double sum = 0.0;
    for (double v : s) sum += v * v;
    return sum / static_cast<double>(s.size());
}

PowerSpectrum psd(std::span<const double> s) {
    if (s.size() < 2)
        throw std::invalid_argument("psd: need at least 2 values");
    auto spec = dft_real(s);
    PowerSpectrum out;
    out.density.resize(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k)
        out.density[k] = std::norm(spec[k]) / static_cast<double>(s.size());
    return out;
}

std::vector<double> circular_autocorr(std::span<const double> s) {
    const int n = static_cast<int>(s.size());
    if (n == 0) return {};
    std::vector<double> c(n);
    double* out = c.data();
#pragma omp parallel for schedule(static) if (n >= 256)
    for (int tau = 0; tau < n; ++tau) {
        double sum = 0.0;
        for (int k = 0; k < n; ++k) {
            int j = k - tau;
            if (j < 0) j += n;
            sum += s[k] * s[j];
        }
        out[tau] = sum / n;
    }
    return c;
}

double wiener_khinchin_residual(std::span<const double> s) {
    if (s.size() < 4)
        throw std::invalid_argument("wiener_khinchin_residual: need at least 4 values");
    const auto c = circular_autocorr(s);
    std::vector<std::complex<double>> cc(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) cc[i] = {c[i], 0.0};
    const auto transformed = dft(cc, false);
    const auto spectrum = psd(s);
    double worst = 0.0;
    for (std::size_t k = 0; k < transformed.size(); ++k)
        worst = std::max(worst, std::abs(transformed[k] - std::complex<double>(spectrum.density[k], 0.0)));
    return worst;
}

} // namespace fm2i
