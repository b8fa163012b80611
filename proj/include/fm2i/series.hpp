#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fm2i {

enum class Period { yearly, quarterly, monthly, other };

const char* period_name(Period p);
Period period_from_name(const std::string& name);

/// One observed series: ordered real values plus benchmark metadata.
struct TimeSeries {
    std::vector<double> values;
    std::string id;
    Period period = Period::other;
    int declared_horizon = 1;

    int length() const { return static_cast<int>(values.size()); }
};

/// Throws std::invalid_argument if the series is shorter than 2 points
/// or contains non-finite values.
void validate(const TimeSeries& ts);

/// Invertible parameters of one scaling step. When `differenced` is set the
/// record also carries the first original value so the cumulative sum can be
/// rebuilt.
struct ScalingRecord {
    double observed_min = 0.0;
    double observed_max = 0.0;
    double target_lo = 0.0;
    double target_hi = 1.0;
    bool differenced = false;
    double anchor = 0.0;

    bool degenerate() const { return observed_min == observed_max; }
};

struct SplitSeries {
    TimeSeries train;
    TimeSeries test;
};

/// Splits off the last `h` values as the test part. The train part keeps the
/// metadata of the input.
SplitSeries split(const TimeSeries& ts, int h);

/// Affine map of `values` onto [lo, hi]: min -> lo, max -> hi. A constant
/// input maps every point to the interval midpoint (the record stores
/// observed_min == observed_max so the inverse can restore the constant).
std::pair<std::vector<double>, ScalingRecord>
minmax_scale(std::span<const double> values, double lo, double hi);

/// Exact affine inverse of minmax_scale. Values outside [lo, hi] are mapped
/// by the same inverse without clamping; forecasts may legitimately leave
/// the target interval.
std::vector<double> unscale(std::span<const double> values, const ScalingRecord& record);

/// First differences s[i+1] - s[i] plus the anchor s[0].
std::pair<std::vector<double>, double> difference(std::span<const double> values);

/// Cumulative sum seeded by `anchor`; exact inverse of difference.
std::vector<double> undifference(std::span<const double> diffs, double anchor);

} // namespace fm2i
