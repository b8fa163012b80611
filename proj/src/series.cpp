#include "fm2i/series.hpp"

#include <cmath>
#include <stdexcept>

namespace fm2i {

const char* period_name(Period p) {
    switch (p) {
    case Period::yearly: return "yearly";
    case Period::quarterly: return "quarterly";
    case Period::monthly: return "monthly";
    case Period::other: return "other";
    }
    return "other";
}

Period period_from_name(const std::string& name) {
    if (name == "yearly") return Period::yearly;
    if (name == "quarterly") return Period::quarterly;
    if (name == "monthly") return Period::monthly;
    if (name == "other") return Period::other;
    throw std::invalid_argument("unknown period: " + name);
}

void validate(const TimeSeries& ts) {
    if (ts.values.size() < 2)
        throw std::invalid_argument("series '" + ts.id + "': length must be >= 2");
    for (double v : ts.values)
        if (!std::isfinite(v))
            throw std::invalid_argument("series '" + ts.id + "': non-finite value");
}

SplitSeries split(const TimeSeries& ts, int h) {
    if (h <= 0)
        throw std::invalid_argument("split: horizon must be positive");
    if (h >= ts.length())
        throw std::invalid_argument("split: horizon exceeds series");

    SplitSeries out;
    out.train = ts;
    out.train.values.assign(ts.values.begin(), ts.values.end() - h);
    out.test = ts;
    out.test.values.assign(ts.values.end() - h, ts.values.end());
    return out;
}

std::pair<std::vector<double>, ScalingRecord>
minmax_scale(std::span<const double> values, double lo, double hi) {
    if (!(lo < hi))
        throw std::invalid_argument("minmax_scale: target_lo must be < target_hi");
    if (values.empty())
        throw std::invalid_argument("minmax_scale: empty input");

    double mn = values[0];
    double mx = values[0];
    for (double v : values) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }

    ScalingRecord rec;
    rec.observed_min = mn;
    rec.observed_max = mx;
    rec.target_lo = lo;
    rec.target_hi = hi;

    std::vector<double> out(values.size());
    if (mn == mx) {
        // Constant input: midpoint rule keeps the map invertible.
        const double mid = 0.5 * (lo + hi);
        for (auto& v : out) v = mid;
        return {std::move(out), rec};
    }
    const double scale = (hi - lo) / (mx - mn);
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = lo + (values[i] - mn) * scale;
    return {std::move(out), rec};
}

std::vector<double> unscale(std::span<const double> values, const ScalingRecord& record) {
    std::vector<double> out(values.size());
    if (record.degenerate()) {
        for (auto& v : out) v = record.observed_min;
        return out;
    }
    const double scale = (record.observed_max - record.observed_min) /
                         (record.target_hi - record.target_lo);
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = record.observed_min + (values[i] - record.target_lo) * scale;
    return out;
}

std::pair<std::vector<double>, double> difference(std::span<const double> values) {
    if (values.size() < 2)
        throw std::invalid_argument("difference: need at least 2 values");
    std::vector<double> diffs(values.size() - 1);
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        diffs[i] = values[i + 1] - values[i];
    return {std::move(diffs), values[0]};
}

std::vector<double> undifference(std::span<const double> diffs, double anchor) {
    std::vector<double> out(diffs.size() + 1);
    out[0] = anchor;
    for (std::size_t i = 0; i < diffs.size(); ++i)
        out[i + 1] = out[i] + diffs[i];
    return out;
}

} // namespace fm2i
