#include "fm2i/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fm2i {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(where + ": bad number '" + s + "'");
    }
}

long parse_long(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(where + ": bad integer '" + s + "'");
    }
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt17(*v) : std::string("undefined");
}

} // namespace

const char* category_name(Category c) {
    switch (c) {
    case Category::micro: return "micro";
    case Category::industry: return "industry";
    case Category::macro: return "macro";
    case Category::finance: return "finance";
    case Category::demog: return "demog";
    case Category::other: return "other";
    }
    return "other";
}

Category category_from_name(const std::string& name) {
    if (name == "micro") return Category::micro;
    if (name == "industry") return Category::industry;
    if (name == "macro") return Category::macro;
    if (name == "finance") return Category::finance;
    if (name == "demog") return Category::demog;
    if (name == "other") return Category::other;
    throw std::invalid_argument("unknown category: " + name);
}

int default_horizon(Period p) {
    switch (p) {
    case Period::yearly: return 6;
    case Period::quarterly: return 8;
    case Period::monthly: return 18;
    case Period::other: return 8;
    }
    return 8;
}

MetricsRow metrics(std::span<const double> forecast, std::span<const double> actual) {
    if (forecast.size() != actual.size())
        throw std::invalid_argument("metrics: forecast/actual length mismatch");
    if (forecast.empty())
        throw std::invalid_argument("metrics: empty inputs");

    const double n = static_cast<double>(forecast.size());
    double se = 0.0, ae = 0.0, ape = 0.0, sape = 0.0;
    bool mape_defined = true, smape_defined = true;
    for (std::size_t i = 0; i < forecast.size(); ++i) {
        const double err = forecast[i] - actual[i];
        se += err * err;
        ae += std::abs(err);
        if (actual[i] == 0.0)
            mape_defined = false;
        else
            ape += std::abs(err / actual[i]);
        const double denom = std::abs(forecast[i]) + std::abs(actual[i]);
        if (denom == 0.0)
            smape_defined = false;
        else
            sape += std::abs(err) / denom;
    }

    MetricsRow row;
    row.mse = se / n;
    row.rmse = std::sqrt(row.mse);
    row.mae = ae / n;
    if (mape_defined) row.mape = ape / n * 100.0;
    if (smape_defined) row.smape = 2.0 / n * sape * 100.0;
    return row;
}

std::vector<double> naive_forecast(std::span<const double> series, int h) {
    if (series.empty())
        throw std::invalid_argument("naive_forecast: empty series");
    if (h < 0)
        throw std::invalid_argument("naive_forecast: negative horizon");
    return std::vector<double>(static_cast<std::size_t>(h), series.back());
}

Dataset ingest_csv_stream(std::istream& in, const std::string& source_name) {
    Dataset ds;
    std::string line;
    int line_no = 0;
    std::set<std::string> seen_ids;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (line_no == 1 && line.rfind("id,", 0) == 0) continue; // header

        const std::string where = source_name + ": row " + std::to_string(line_no);
        const auto fields = split_fields(line);
        if (fields.size() < 6)
            throw std::invalid_argument(where + ": expected id,category,period,horizon,n,values...");

        BenchSeries entry;
        entry.series.id = fields[0];
        if (entry.series.id.empty())
            throw std::invalid_argument(where + ": empty id");
        if (!seen_ids.insert(entry.series.id).second)
            throw std::invalid_argument(where + ": duplicate id '" + entry.series.id + "'");
        try {
            entry.category = category_from_name(fields[1]);
            entry.series.period = period_from_name(fields[2]);
        } catch (const std::exception& e) {
            throw std::invalid_argument(where + ": " + e.what());
        }

        const long horizon = fields[3].empty() ? 0 : parse_long(fields[3], where);
        const long n = parse_long(fields[4], where);
        if (n < 2)
            throw std::invalid_argument(where + ": series length must be >= 2");
        if (static_cast<long>(fields.size()) - 5 != n)
            throw std::invalid_argument(where + ": declared n=" + std::to_string(n) + " but found " +
                                        std::to_string(fields.size() - 5) + " values");

        entry.series.declared_horizon =
            horizon > 0 ? static_cast<int>(horizon) : default_horizon(entry.series.period);
        if (entry.series.declared_horizon >= n)
            throw std::invalid_argument(where + ": horizon >= series length");

        entry.series.values.reserve(n);
        for (long i = 0; i < n; ++i)
            entry.series.values.push_back(parse_double(fields[5 + i], where));
        try {
            validate(entry.series);
        } catch (const std::exception& e) {
            throw std::invalid_argument(where + ": " + e.what());
        }
        ds.entries.push_back(std::move(entry));
    }
    return ds;
}

Dataset ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("ingest_csv: cannot open " + path);
    return ingest_csv_stream(in, path);
}

void write_dataset_csv(const Dataset& ds, std::ostream& os) {
    os << "id,category,period,horizon,n\n"; // value columns are ragged
    for (const auto& e : ds.entries) {
        os << e.series.id << ',' << category_name(e.category) << ',' << period_name(e.series.period)
           << ',' << e.series.declared_horizon << ',' << e.series.values.size();
        for (double v : e.series.values) os << ',' << fmt17(v);
        os << '\n';
    }
}

MetricsReport compare(const Dataset& ds,
                      const std::map<std::string, MethodForecasts>& method_forecasts) {
    if (method_forecasts.empty())
        throw std::invalid_argument("compare: no methods supplied");
    if (ds.entries.empty())
        throw std::invalid_argument("compare: empty dataset");

    // Coverage check up front; report every gap at once.
    std::string gaps;
    for (const auto& [method, forecasts] : method_forecasts) {
        for (const auto& e : ds.entries) {
            const auto it = forecasts.find(e.series.id);
            if (it == forecasts.end())
                gaps += method + ": missing series " + e.series.id + "\n";
            else if (static_cast<int>(it->second.size()) != e.series.declared_horizon)
                gaps += method + ": series " + e.series.id + " has " +
                        std::to_string(it->second.size()) + " values, expected " +
                        std::to_string(e.series.declared_horizon) + "\n";
        }
    }
    if (!gaps.empty())
        throw ComparisonGapError("compare: incomplete forecasts\n" + gaps);

    MetricsReport report;
    std::map<std::string, MethodSummary> sums;
    for (const auto& [method, _] : method_forecasts) {
        MethodSummary s;
        s.method = method;
        sums.emplace(method, s);
    }

    struct Accum {
        double mse = 0, rmse = 0, mae = 0, mape = 0, smape = 0;
        int n = 0, mape_n = 0, smape_n = 0;
    };
    std::map<std::string, Accum> acc;

    for (const auto& e : ds.entries) {
        const int h = e.series.declared_horizon;
        std::span<const double> actual(e.series.values.data() + e.series.values.size() - h,
                                       static_cast<std::size_t>(h));
        std::optional<double> best_smape;
        std::map<std::string, std::optional<double>> series_smape;
        for (const auto& [method, forecasts] : method_forecasts) {
            const auto& f = forecasts.at(e.series.id);
            MetricsRow row = metrics(f, actual);
            report.per_series.push_back({e.series.id, method, row});
            series_smape[method] = row.smape;
            auto& a = acc[method];
            a.mse += row.mse;
            a.rmse += row.rmse;
            a.mae += row.mae;
            ++a.n;
            if (row.mape) {
                a.mape += *row.mape;
                ++a.mape_n;
            }
            if (row.smape) {
                a.smape += *row.smape;
                ++a.smape_n;
                if (!best_smape || *row.smape < *best_smape) best_smape = *row.smape;
            }
        }
        if (best_smape) {
            ++report.series_counted_for_best;
            // Ties credit every tied method.
            for (const auto& [method, smape] : series_smape)
                if (smape && *smape == *best_smape) ++sums.at(method).times_best;
        }
    }

    for (auto& [method, s] : sums) {
        const auto& a = acc.at(method);
        s.avg_mse = a.mse / a.n;
        s.avg_rmse = a.rmse / a.n;
        s.avg_mae = a.mae / a.n;
        s.avg_mape = a.mape_n > 0 ? a.mape / a.mape_n : 0.0;
        s.avg_smape = a.smape_n > 0 ? a.smape / a.smape_n : 0.0;
        s.mape_excluded = a.n - a.mape_n;
        s.smape_excluded = a.n - a.smape_n;
        s.pct_best = report.series_counted_for_best > 0
                         ? 100.0 * s.times_best / report.series_counted_for_best
                         : 0.0;
    }

    // Ranks per metric: 1 = smallest average; ties resolved by method name.
    auto assign_ranks = [&](auto accessor, int MethodSummary::*rank_field) {
        std::vector<std::string> order;
        for (const auto& [method, _] : sums) order.push_back(method);
        std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
            const double va = accessor(sums.at(a));
            const double vb = accessor(sums.at(b));
            if (va != vb) return va < vb;
            return a < b;
        });
        for (std::size_t i = 0; i < order.size(); ++i)
            sums.at(order[i]).*rank_field = static_cast<int>(i) + 1;
    };
    assign_ranks([](const MethodSummary& s) { return s.avg_mse; }, &MethodSummary::rank_mse);
    assign_ranks([](const MethodSummary& s) { return s.avg_rmse; }, &MethodSummary::rank_rmse);
    assign_ranks([](const MethodSummary& s) { return s.avg_mae; }, &MethodSummary::rank_mae);
    assign_ranks([](const MethodSummary& s) { return s.avg_mape; }, &MethodSummary::rank_mape);
    assign_ranks([](const MethodSummary& s) { return s.avg_smape; }, &MethodSummary::rank_smape);

    for (auto& [method, s] : sums) report.summaries.push_back(s);
    std::sort(report.summaries.begin(), report.summaries.end(),
              [](const MethodSummary& a, const MethodSummary& b) {
                  if (a.avg_smape != b.avg_smape) return a.avg_smape < b.avg_smape;
                  return a.method < b.method;
              });
    return report;
}

void write_report_csv(const MetricsReport& report, std::ostream& os) {
    os << "method,avg_mse,avg_mae,avg_rmse,avg_mape,avg_smape,"
          "rank_mae,rank_mse,rank_rmse,rank_mape,rank_smape,"
          "times_best,pct_best,mape_excluded,smape_excluded\n";
    for (const auto& s : report.summaries) {
        os << s.method << ',' << fmt17(s.avg_mse) << ',' << fmt17(s.avg_mae) << ','
           << fmt17(s.avg_rmse) << ',' << fmt17(s.avg_mape) << ',' << fmt17(s.avg_smape) << ','
           << s.rank_mae << ',' << s.rank_mse << ',' << s.rank_rmse << ',' << s.rank_mape << ','
           << s.rank_smape << ',' << s.times_best << ',' << fmt17(s.pct_best) << ','
           << s.mape_excluded << ',' << s.smape_excluded << '\n';
    }
}

void write_report_text(const MetricsReport& report, std::ostream& os) {
    char buf[256];
    os << "Average errors and ranks across all methods\n";
    std::snprintf(buf, sizeof(buf), "%-14s %12s %12s %12s %9s %9s  %-20s %s\n", "Method", "MSE",
                  "MAE", "RMSE", "MAPE%", "sMAPE%", "ranks(MAE,MSE,RMSE,MAPE,sMAPE)",
                  "best(count,%)");
    os << buf;
    for (const auto& s : report.summaries) {
        std::snprintf(buf, sizeof(buf),
                      "%-14s %12.2f %12.2f %12.2f %9.2f %9.2f  (%d,%d,%d,%d,%d)%*s %d (%.2f%%)\n",
                      s.method.c_str(), s.avg_mse, s.avg_mae, s.avg_rmse, s.avg_mape, s.avg_smape,
                      s.rank_mae, s.rank_mse, s.rank_rmse, s.rank_mape, s.rank_smape, 12, "",
                      s.times_best, s.pct_best);
        os << buf;
    }
}

void write_per_series_csv(const MetricsReport& report, std::ostream& os) {
    os << "id,method,mse,rmse,mae,mape,smape\n";
    for (const auto& r : report.per_series) {
        os << r.id << ',' << r.method << ',' << fmt17(r.row.mse) << ',' << fmt17(r.row.rmse) << ','
           << fmt17(r.row.mae) << ',' << fmt_opt(r.row.mape) << ',' << fmt_opt(r.row.smape) << '\n';
    }
}

} // namespace fm2i
