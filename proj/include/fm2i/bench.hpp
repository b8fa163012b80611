#pragma once

#include "fm2i/series.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace fm2i {

enum class Category { micro, industry, macro, finance, demog, other };

const char* category_name(Category c);
Category category_from_name(const std::string& name);

/// Default forecasting horizon for a period (used when a dataset row leaves
/// the horizon blank).
int default_horizon(Period p);

struct BenchSeries {
    TimeSeries series;
    Category category = Category::other;
};

struct Dataset {
    std::vector<BenchSeries> entries;

    std::size_t size() const { return entries.size(); }
};

/// Per-series error metrics. MAPE/sMAPE are percentages and absent when a
/// zero denominator makes them undefined.
struct MetricsRow {
    double mse = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    std::optional<double> mape;
    std::optional<double> smape;
};

MetricsRow metrics(std::span<const double> forecast, std::span<const double> actual);

/// Random-walk baseline: the last observed value repeated h times.
std::vector<double> naive_forecast(std::span<const double> series, int h);

/// Reads the documented schema `id,category,period,horizon,n,v0,v1,...`.
/// A blank or zero horizon falls back to the period default. An optional
/// header line starting with "id," is skipped.
Dataset ingest_csv(const std::string& path);
Dataset ingest_csv_stream(std::istream& in, const std::string& source_name);
void write_dataset_csv(const Dataset& ds, std::ostream& os);

/// Forecasts for one method, keyed by series id.
using MethodForecasts = std::map<std::string, std::vector<double>>;

struct MethodSummary {
    std::string method;
    double avg_mse = 0.0;
    double avg_rmse = 0.0;
    double avg_mae = 0.0;
    double avg_mape = 0.0;  // over series where defined
    double avg_smape = 0.0; // over series where defined
    int mape_excluded = 0;
    int smape_excluded = 0;
    int rank_mse = 0;
    int rank_rmse = 0;
    int rank_mae = 0;
    int rank_mape = 0;
    int rank_smape = 0;
    int times_best = 0;   // by per-series sMAPE, ties credited to all
    double pct_best = 0.0;
};

struct PerSeriesRow {
    std::string id;
    std::string method;
    MetricsRow row;
};

struct MetricsReport {
    std::vector<PerSeriesRow> per_series;   // dataset order, then method name
    std::vector<MethodSummary> summaries;   // sorted by avg sMAPE ascending
    int series_counted_for_best = 0;
};

/// Raised when a method is missing forecasts; the message lists every gap.
struct ComparisonGapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scores every method against the last-h tail of each dataset series.
MetricsReport compare(const Dataset& ds,
                      const std::map<std::string, MethodForecasts>& method_forecasts);

void write_report_csv(const MetricsReport& report, std::ostream& os);
void write_report_text(const MetricsReport& report, std::ostream& os);
void write_per_series_csv(const MetricsReport& report, std::ostream& os);

} // namespace fm2i
