#pragma once

#include "fm2i/series.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fm2i {

enum class MatrixKind { stam, mac, gasf, gc, gcs1, gcs2, rpm };

const char* matrix_kind_name(MatrixKind k);
MatrixKind matrix_kind_from_name(const std::string& name);
bool is_gc_family(MatrixKind k);

/// Square matrix home of a series. `source_len` is the number of series
/// points the known block was built from; `horizon` > 0 once a forecast
/// region has been attached (side == source_len + horizon).
struct MatrixRepr {
    MatrixKind kind = MatrixKind::mac;
    int side = 0;
    int source_len = 0;
    int horizon = 0;
    std::vector<double> data; // row-major

    double at(int i, int j) const { return data[static_cast<std::size_t>(i) * side + j]; }
    double& at(int i, int j) { return data[static_cast<std::size_t>(i) * side + j]; }
};

/// Known/unknown flags for an extended matrix (1 = known).
struct RegionMask {
    int side = 0;
    std::vector<std::uint8_t> known;

    bool is_known(int i, int j) const { return known[static_cast<std::size_t>(i) * side + j] != 0; }
};

// Inputs to the GC family are rescaled into [eps, 1-eps] upstream so the
// 1/(2x) diagonal and the sin(theta_i+theta_j) denominator stay regular.
inline constexpr double kGcClampEps = 0.05;

MatrixRepr to_stam(std::span<const double> s);
MatrixRepr to_mac(std::span<const double> s);
MatrixRepr to_gasf(std::span<const double> s); // inputs in [0,1]
MatrixRepr to_gc(std::span<const double> s);   // inputs in [0,1], singularities rejected
MatrixRepr to_gcs1(std::span<const double> s);
MatrixRepr to_gcs2(std::span<const double> s);
MatrixRepr to_rpm(std::span<const double> s);  // inputs in [0,1]

MatrixRepr make_matrix(MatrixKind kind, std::span<const double> s);

/// Grows the matrix by h rows/columns; the L-shaped band (last h rows and
/// last h columns) is flagged unknown and zero-filled.
std::pair<MatrixRepr, RegionMask> extend_for_forecast(const MatrixRepr& m, int h);

/// Everything needed to invert a matrix-level transform: the kind, the
/// record of the matrix value rescale, and the clamp epsilon used for the
/// GC family.
struct TransformContext {
    MatrixKind kind = MatrixKind::mac;
    ScalingRecord matrix_scaling;
    double clamp_eps = kGcClampEps;
};

enum class EstimatorVariant { standard, diagonal };

enum class EstimatorPath {
    least_squares,
    median,
    diagonal,
    column_median_fallback,
    diagonal_fallback,
    greedy_backsub,
    constant_fallback,
};

const char* estimator_path_name(EstimatorPath p);
const char* estimator_variant_name(EstimatorVariant v);
EstimatorVariant estimator_variant_from_name(const std::string& name);

/// Forecast values in scaled-series space plus the estimator route taken
/// for each value.
struct ForecastExtraction {
    std::vector<double> values;
    std::vector<EstimatorPath> paths;
};

/// Reads h forecast values out of a fully filled extended matrix (already
/// mapped back to matrix units). `known_scaled` is the scaled series the
/// known block was built from.
ForecastExtraction extract_forecast(const MatrixRepr& filled, const TransformContext& ctx,
                                    std::span<const double> known_scaled, int h,
                                    EstimatorVariant variant = EstimatorVariant::standard);

/// Debug dump: row-major, comma separated, 17 significant digits.
void write_matrix_csv(const MatrixRepr& m, const std::string& path);

} // namespace fm2i
