#include "fm2i/reference.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fm2i::reference {

std::vector<double> autocorr(std::span<const double> s) {
    const int n1 = static_cast<int>(s.size());
    std::vector<double> gamma(n1, 0.0);
    for (int i = 0; i < n1; ++i) {
        double sum = 0.0;
        for (int k = i; k < n1; ++k)
            sum += s[k] * s[k - i];
        gamma[i] = sum / n1;
    }
    return gamma;
}

double avg_power(std::span<const double> s) {
    double sum = 0.0;
    for (double v : s) sum += v * v;
    return sum / static_cast<double>(s.size());
}

std::vector<std::complex<double>> dft(std::span<const double> s) {
    const std::size_t n = s.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                               static_cast<double>(j) / static_cast<double>(n);
            acc += s[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

std::vector<double> circular_autocorr(std::span<const double> s) {
    const int n = static_cast<int>(s.size());
    std::vector<double> c(n, 0.0);
    for (int tau = 0; tau < n; ++tau) {
        double sum = 0.0;
        for (int k = 0; k < n; ++k)
            sum += s[k] * s[(k - tau + n) % n];
        c[tau] = sum / n;
    }
    return c;
}

std::optional<PatchChoice> best_patch_exhaustive(const FillState& state, int target_row,
                                                 int target_col, int patch_size) {
    const int hp = patch_size / 2;

    // Overlap template: in-bounds, known target cells.
    std::vector<std::pair<int, int>> overlap;
    for (int dr = -hp; dr <= hp; ++dr)
        for (int dc = -hp; dc <= hp; ++dc) {
            const int r = target_row + dr;
            const int c = target_col + dc;
            if (state.in_bounds(r, c) && state.is_known(r, c))
                overlap.emplace_back(dr, dc);
        }
    if (overlap.empty()) return std::nullopt;

    double best_raw = std::numeric_limits<double>::infinity();
    int best_center = -1;
    for (int sr = hp; sr < state.height - hp; ++sr) {
        for (int sc = hp; sc < state.width - hp; ++sc) {
            bool full = true;
            for (int dr = -hp; dr <= hp && full; ++dr)
                for (int dc = -hp; dc <= hp; ++dc)
                    if (!state.is_known(sr + dr, sc + dc)) {
                        full = false;
                        break;
                    }
            if (!full) continue;
            double raw = 0.0;
            for (const auto& [dr, dc] : overlap) {
                const double a = state.values[state.idx(target_row + dr, target_col + dc)];
                const double b = state.values[state.idx(sr + dr, sc + dc)];
                raw += (a - b) * (a - b);
            }
            const int center = static_cast<int>(state.idx(sr, sc));
            if (raw < best_raw || (raw == best_raw && center < best_center)) {
                best_raw = raw;
                best_center = center;
            }
        }
    }
    if (best_center < 0) return std::nullopt;
    PatchChoice out;
    out.row = best_center / state.width;
    out.col = best_center % state.width;
    out.ssd = best_raw / static_cast<double>(overlap.size());
    return out;
}

MetricsRow metrics(std::span<const double> forecast, std::span<const double> actual) {
    if (forecast.size() != actual.size() || forecast.empty())
        throw std::invalid_argument("reference::metrics: length mismatch");
    const double n = static_cast<double>(forecast.size());
    MetricsRow row;
    double se = 0.0, ae = 0.0, ape = 0.0, sape = 0.0;
    bool mape_ok = true, smape_ok = true;
    for (std::size_t i = 0; i < forecast.size(); ++i) {
        const double err = forecast[i] - actual[i];
        se += err * err;
        ae += std::abs(err);
        if (actual[i] == 0.0)
            mape_ok = false;
        else
            ape += std::abs(err / actual[i]);
        const double denom = std::abs(forecast[i]) + std::abs(actual[i]);
        if (denom == 0.0)
            smape_ok = false;
        else
            sape += std::abs(err) / denom;
    }
    row.mse = se / n;
    row.rmse = std::sqrt(se / n);
    row.mae = ae / n;
    if (mape_ok) row.mape = ape / n * 100.0;
    if (smape_ok) row.smape = 2.0 / n * sape * 100.0;
    return row;
}

} // namespace fm2i::reference
