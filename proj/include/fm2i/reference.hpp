#pragma once

// Plain serial re-implementations of the hot kernels, kept deliberately
// independent of the production code paths. Tests use them as oracles and
// the kernel benchmark compares against them.

#include "fm2i/inpaint.hpp"

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace fm2i::reference {

/// gamma(i) = (1/(n+1)) sum_{k=i..n} s[k] s[k-i], straight double loop.
std::vector<double> autocorr(std::span<const double> s);

double avg_power(std::span<const double> s);

/// Direct O(N^2) DFT.
std::vector<std::complex<double>> dft(std::span<const double> s);

/// Serial circular-lag autocorrelation.
std::vector<double> circular_autocorr(std::span<const double> s);

/// Exhaustive-search argmin of normalized SSD over every fully known,
/// fully in-bounds source window; ties break on the smaller row-major
/// center index. Returns nothing when no candidate exists.
std::optional<PatchChoice> best_patch_exhaustive(const FillState& state, int target_row,
                                                 int target_col, int patch_size);

struct MetricsRow {
    double mse = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    std::optional<double> mape;  // percent
    std::optional<double> smape; // percent
};

/// Literal re-evaluation of the error formulas.
MetricsRow metrics(std::span<const double> forecast, std::span<const double> actual);

} // namespace fm2i::reference
