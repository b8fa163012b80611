// Batch command-line front end: series -> matrix -> image -> inpaint ->
// forecast, plus an M3-style comparison harness.

#include "fm2i/bench.hpp"
#include "fm2i/imaging.hpp"
#include "fm2i/inpaint.hpp"
#include "fm2i/transforms.hpp"
#include "fm2i/tuner.hpp"
#include "fm2i/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIncomplete = 4;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct GlobalOptions {
    int threads = 0; // 0 = machine default
    std::optional<long> seed; // accepted for interface compatibility; the pipeline is deterministic
};

void apply_threads(const GlobalOptions& g) {
#ifdef _OPENMP
    if (g.threads > 0) omp_set_num_threads(g.threads);
#else
    (void)g;
#endif
}

void write_manifest(const fs::path& out_dir, const std::string& command, const json& config,
                    const std::vector<std::string>& inputs, const std::vector<std::string>& outputs,
                    const GlobalOptions& g) {
    json m;
    m["command"] = command;
    m["version"] = fm2i::kVersion;
    const auto now = std::chrono::system_clock::now();
    m["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    m["config"] = config;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    m["threads"] = g.threads;
    if (g.seed)
        m["seed"] = *g.seed;
    else
        m["seed"] = nullptr;
    std::ofstream f(out_dir / "run_manifest.json");
    f << m.dump(2) << '\n';
}

fm2i::Dataset load_dataset_or_exit(const std::string& path) {
    try {
        return fm2i::ingest_csv(path);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        std::exit(kExitInput);
    }
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        std::cerr << "input error: cannot create output directory " << dir << '\n';
        std::exit(kExitInput);
    }
}

// ---------------------------------------------------------------------------
// fm2i transform

int cmd_transform(const std::string& input, const std::string& kind_name,
                  const std::string& out_dir_s, const GlobalOptions& g) {
    apply_threads(g);
    fm2i::MatrixKind kind;
    try {
        kind = fm2i::matrix_kind_from_name(kind_name);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    }
    const fm2i::Dataset ds = load_dataset_or_exit(input);
    const fs::path out_dir(out_dir_s);
    ensure_dir(out_dir);

    fm2i::ModelConfig cfg;
    cfg.kind = kind;
    fm2i::apply_kind_bounds(cfg);
    if (fm2i::is_gc_family(kind))
        std::cerr << "warning: " << kind_name << " inputs rescaled into ["
                  << cfg.series_lo << "," << cfg.series_hi << "] to avoid singular entries\n";

    std::vector<std::string> outputs;
    try {
        for (const auto& entry : ds.entries) {
            auto [scaled, rec] = fm2i::minmax_scale(entry.series.values, cfg.series_lo, cfg.series_hi);
            (void)rec;
            const fm2i::MatrixRepr m = fm2i::make_matrix(kind, scaled);

            const std::string stem = entry.series.id + "_" + kind_name;
            const fs::path csv_path = out_dir / (stem + ".csv");
            fm2i::write_matrix_csv(m, csv_path.string());
            outputs.push_back(csv_path.string());

            auto [img_vals, mrec] = fm2i::minmax_scale(m.data, 0.0, 1.0);
            (void)mrec;
            fm2i::EncodingSpec spec;
            const fm2i::ImageGrid img =
                fm2i::encode(img_vals, nullptr, m.side, m.side, spec);
            const fs::path ppm_path = out_dir / (stem + ".ppm");
            fm2i::export_ppm(img, ppm_path.string());
            outputs.push_back(ppm_path.string());
        }
    } catch (const std::exception& e) {
        std::cerr << "transform failed: " << e.what() << '\n';
        return kExitInfeasible;
    }

    write_manifest(out_dir, "transform", {{"kind", kind_name}}, {input}, outputs, g);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// fm2i forecast

void write_forecast_csv(std::ostream& os,
                        const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
    os << "id,step,value\n";
    for (const auto& [id, values] : rows)
        for (std::size_t i = 0; i < values.size(); ++i)
            os << id << ',' << (i + 1) << ',' << fmt17(values[i]) << '\n';
}

int cmd_forecast(const std::string& input, int horizon, const std::string& config_path,
                 bool auto_tune, bool holdout, bool fill_log, const std::string& out_dir_s,
                 const GlobalOptions& g) {
    apply_threads(g);
    if (horizon < 0) {
        std::cerr << "input error: horizon must be >= 0\n";
        return kExitInput;
    }
    if (auto_tune == !config_path.empty()) {
        std::cerr << "input error: exactly one of --config and --auto is required\n";
        return kExitInput;
    }
    const fm2i::Dataset ds = load_dataset_or_exit(input);
    const fs::path out_dir(out_dir_s);
    ensure_dir(out_dir);

    std::optional<fm2i::ModelConfig> fixed_cfg;
    if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) {
            std::cerr << "input error: cannot open config " << config_path << '\n';
            return kExitInput;
        }
        try {
            fixed_cfg = fm2i::parse_config_file(f);
        } catch (const std::exception& e) {
            std::cerr << "input error: " << e.what() << '\n';
            return kExitInput;
        }
    }

    std::vector<std::pair<std::string, std::vector<double>>> forecasts;
    std::ostringstream metrics_csv;
    metrics_csv << "id,method,mse,rmse,mae,mape,smape\n";
    json resolved = json::array();

    try {
        const fm2i::ConfigSpace space = fm2i::ConfigSpace::defaults();
        for (const auto& entry : ds.entries) {
            fm2i::TimeSeries work = entry.series;
            std::vector<double> actual_tail;
            if (holdout && horizon > 0) {
                const fm2i::SplitSeries parts = fm2i::split(work, horizon);
                work = parts.train;
                actual_tail = parts.test.values;
            }

            fm2i::ModelConfig cfg;
            if (fixed_cfg) {
                cfg = *fixed_cfg;
            } else {
                const int pseudo_h = fm2i::exploration_horizon(
                    horizon > 0 ? horizon : work.declared_horizon, space);
                const fm2i::ModelLog log = fm2i::grid_search(work, space, pseudo_h);
                cfg = fm2i::select_frequent(log);
                std::ofstream logf(out_dir / (entry.series.id + "_model_log.csv"));
                log.write_csv(logf);
            }

            std::vector<fm2i::FillRecord> steps;
            const std::vector<double> fc =
                fm2i::forecast_values(work.values, cfg, horizon, fill_log ? &steps : nullptr);
            forecasts.emplace_back(entry.series.id, fc);
            if (fill_log) {
                std::ofstream lf(out_dir / (entry.series.id + "_fill_log.csv"));
                fm2i::dump_fill_log(steps, lf);
            }
            json jc;
            jc["id"] = entry.series.id;
            jc["config"] = fm2i::config_to_string(cfg);
            resolved.push_back(jc);

            if (holdout && horizon > 0) {
                const fm2i::MetricsRow row = fm2i::metrics(fc, actual_tail);
                metrics_csv << entry.series.id << ",fm2i," << fmt17(row.mse) << ','
                            << fmt17(row.rmse) << ',' << fmt17(row.mae) << ','
                            << (row.mape ? fmt17(*row.mape) : "undefined") << ','
                            << (row.smape ? fmt17(*row.smape) : "undefined") << '\n';
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    }

    std::vector<std::string> outputs;
    {
        const fs::path p = out_dir / "forecast.csv";
        std::ofstream f(p);
        write_forecast_csv(f, forecasts);
        outputs.push_back(p.string());
    }
    if (holdout && horizon > 0) {
        const fs::path p = out_dir / "holdout_metrics.csv";
        std::ofstream f(p);
        f << metrics_csv.str();
        outputs.push_back(p.string());
    }

    json config;
    config["horizon"] = horizon;
    config["auto"] = auto_tune;
    config["holdout"] = holdout;
    config["resolved"] = resolved;
    write_manifest(out_dir, "forecast", config, {input}, outputs, g);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// fm2i bench

fm2i::MethodForecasts load_method_csv(const fs::path& path) {
    std::ifstream f(path);
    if (!f)
        throw std::invalid_argument("cannot open " + path.string());
    fm2i::MethodForecasts out;
    std::string line;
    int line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (line_no == 1 && line.rfind("id,", 0) == 0) continue;
        std::istringstream ls(line);
        std::string id, step_s, value_s;
        if (!std::getline(ls, id, ',') || !std::getline(ls, step_s, ',') ||
            !std::getline(ls, value_s))
            throw std::invalid_argument(path.string() + ": row " + std::to_string(line_no) +
                                        ": expected id,step,value");
        out[id].push_back(std::stod(value_s));
    }
    return out;
}

int cmd_bench(const std::string& dataset_path, const std::string& methods_dir,
              const std::string& out_dir_s, const GlobalOptions& g) {
    apply_threads(g);
    const fm2i::Dataset ds = load_dataset_or_exit(dataset_path);
    if (ds.entries.empty()) {
        std::cerr << "input error: dataset is empty\n";
        return kExitInput;
    }
    const fs::path out_dir(out_dir_s);
    ensure_dir(out_dir);

    std::map<std::string, fm2i::MethodForecasts> methods;

    // External forecast sets: one CSV per method in --methods.
    if (!methods_dir.empty()) {
        std::vector<fs::path> files;
        try {
            for (const auto& de : fs::directory_iterator(methods_dir))
                if (de.path().extension() == ".csv") files.push_back(de.path());
        } catch (const std::exception& e) {
            std::cerr << "input error: " << e.what() << '\n';
            return kExitInput;
        }
        std::sort(files.begin(), files.end());
        for (const auto& p : files) {
            try {
                methods[p.stem().string()] = load_method_csv(p);
            } catch (const std::exception& e) {
                std::cerr << "input error: " << e.what() << '\n';
                return kExitInput;
            }
        }
    }

    // Internal methods: the naive baseline and the tuned pipeline.
    const fm2i::ConfigSpace space = fm2i::ConfigSpace::defaults();
    fm2i::MethodForecasts naive_fc;
    fm2i::MethodForecasts fm2i_fc;
    std::vector<std::string> tune_errors(ds.entries.size());
    std::vector<std::vector<double>> fm2i_results(ds.entries.size());
    std::vector<std::vector<double>> naive_results(ds.entries.size());

    struct Diag {
        std::string mined;
        double mined_smape = 0.0;
        std::string oracle;
        double oracle_smape = 0.0;
    };
    std::vector<Diag> diags(ds.entries.size());

    const int n_series = static_cast<int>(ds.entries.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n_series; ++i) {
        const auto& entry = ds.entries[i];
        const int h = entry.series.declared_horizon;
        try {
            const fm2i::SplitSeries parts = fm2i::split(entry.series, h);
            naive_results[i] = fm2i::naive_forecast(parts.train.values, h);
            const int pseudo_h = fm2i::exploration_horizon(h, space);
            const fm2i::ModelLog log = fm2i::grid_search(parts.train, space, pseudo_h);
            const fm2i::ModelConfig cfg = fm2i::select_frequent(log);
            fm2i_results[i] = fm2i::forecast(parts.train, cfg, h);

            // the mined model is not always the best fitting one; report both
            const fm2i::MetricsRow mined =
                fm2i::metrics(fm2i_results[i], parts.test.values);
            const fm2i::OracleBest best =
                fm2i::oracle_best(parts.train, space, parts.test.values);
            diags[i] = {fm2i::config_to_string(cfg), mined.smape.value_or(-1.0),
                        fm2i::config_to_string(best.config), best.smape};
        } catch (const std::exception& e) {
            tune_errors[i] = e.what();
        }
    }
    for (int i = 0; i < n_series; ++i) {
        if (!tune_errors[i].empty()) {
            std::cerr << "infeasible: series " << ds.entries[i].series.id << ": "
                      << tune_errors[i] << '\n';
            return kExitInfeasible;
        }
        naive_fc[ds.entries[i].series.id] = naive_results[i];
        fm2i_fc[ds.entries[i].series.id] = fm2i_results[i];
    }
    methods["naive"] = std::move(naive_fc);
    methods["fm2i"] = std::move(fm2i_fc);

    fm2i::MetricsReport report;
    try {
        report = fm2i::compare(ds, methods);
    } catch (const fm2i::ComparisonGapError& e) {
        std::cerr << e.what();
        return kExitIncomplete;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    }

    std::vector<std::string> outputs;
    {
        const fs::path p = out_dir / "report.csv";
        std::ofstream f(p);
        fm2i::write_report_csv(report, f);
        outputs.push_back(p.string());
    }
    {
        const fs::path p = out_dir / "report.txt";
        std::ofstream f(p);
        fm2i::write_report_text(report, f);
        outputs.push_back(p.string());
    }
    {
        const fs::path p = out_dir / "per_series.csv";
        std::ofstream f(p);
        fm2i::write_per_series_csv(report, f);
        outputs.push_back(p.string());
    }
    {
        const fs::path p = out_dir / "diagnostics.csv";
        std::ofstream f(p);
        f << "id,mined_config,mined_smape,oracle_config,oracle_smape\n";
        for (int i = 0; i < n_series; ++i)
            f << ds.entries[i].series.id << ',' << diags[i].mined << ','
              << fmt17(diags[i].mined_smape) << ',' << diags[i].oracle << ','
              << fmt17(diags[i].oracle_smape) << '\n';
        outputs.push_back(p.string());
    }
    {
        const fs::path fdir = out_dir / "forecasts";
        ensure_dir(fdir);
        for (const auto& [name, fc] : methods) {
            const fs::path p = fdir / (name + ".csv");
            std::ofstream f(p);
            std::vector<std::pair<std::string, std::vector<double>>> rows;
            for (const auto& entry : ds.entries)
                rows.emplace_back(entry.series.id, fc.at(entry.series.id));
            write_forecast_csv(f, rows);
            outputs.push_back(p.string());
        }
    }

    json config;
    config["methods_dir"] = methods_dir;
    json names = json::array();
    for (const auto& [name, _] : methods) names.push_back(name);
    config["methods"] = names;
    write_manifest(out_dir, "bench", config, {dataset_path}, outputs, g);

    std::ifstream rf(out_dir / "report.txt");
    std::cout << rf.rdbuf();
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"FM2I: time-series forecasting by matrix imaging and patch inpainting"};
    app.set_version_flag("--version", fm2i::kVersion);
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--threads", g.threads, "worker threads (default: machine parallelism)");
    long seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value,
                                    "accepted and recorded; the pipeline is deterministic");

    std::string input, kind, out_dir, config_path, methods_dir;
    int horizon = 0;
    bool auto_tune = false, holdout = false, fill_log = false;

    auto* t = app.add_subcommand("transform", "emit matrix CSV and PPM image per series");
    t->add_option("--input", input, "series CSV")->required();
    t->add_option("--kind", kind, "stam|mac|gasf|gc|gcs1|gcs2|rpm")->required();
    t->add_option("--out", out_dir, "output directory")->required();

    auto* f = app.add_subcommand("forecast", "forecast each series in the input");
    f->add_option("--input", input, "series CSV")->required();
    f->add_option("--horizon", horizon, "forecast steps")->required();
    f->add_option("--config", config_path, "model config file (key = value)");
    f->add_flag("--auto", auto_tune, "tune the model per series by grid search");
    f->add_flag("--holdout", holdout, "score against the held-out tail");
    f->add_flag("--fill-log", fill_log, "dump per-series inpainting fill logs");
    f->add_option("--out", out_dir, "output directory")->required();

    auto* b = app.add_subcommand("bench", "M3-style comparison harness");
    b->add_option("--dataset", input, "dataset CSV")->required();
    b->add_option("--methods", methods_dir, "directory of external forecast CSVs");
    b->add_option("--out", out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }
    if (!seed_opt->empty()) g.seed = seed_value;

    if (t->parsed()) return cmd_transform(input, kind, out_dir, g);
    if (f->parsed())
        return cmd_forecast(input, horizon, config_path, auto_tune, holdout, fill_log, out_dir, g);
    if (b->parsed()) return cmd_bench(input, methods_dir, out_dir, g);
    return kExitInput;
}
