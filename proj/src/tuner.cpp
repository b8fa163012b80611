#include "fm2i/tuner.hpp"

#include "fm2i/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fm2i {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void stage_fail(const char* stage, const std::exception& e) {
    throw std::runtime_error(std::string(stage) + ": " + e.what());
}

} // namespace

void apply_kind_bounds(ModelConfig& cfg) {
    if (cfg.kind == MatrixKind::gasf) {
        cfg.series_lo = 0.0;
        cfg.series_hi = 1.0;
    } else if (is_gc_family(cfg.kind)) {
        cfg.series_lo = kGcClampEps;
        cfg.series_hi = 1.0 - kGcClampEps;
    } else if (cfg.kind == MatrixKind::rpm) {
        cfg.series_lo = 0.0;
        cfg.series_hi = 1.0;
    } else {
        cfg.series_lo = -1.0;
        cfg.series_hi = 1.0;
    }
}

void check_kind_bounds(const ModelConfig& cfg) {
    if (cfg.kind == MatrixKind::gasf && (cfg.series_lo != 0.0 || cfg.series_hi != 1.0))
        throw std::invalid_argument("config: gasf requires series bounds [0,1]");
    if (is_gc_family(cfg.kind) &&
        (cfg.series_lo != kGcClampEps || cfg.series_hi != 1.0 - kGcClampEps))
        throw std::invalid_argument("config: gc family requires series bounds [0.05,0.95]");
    if (cfg.kind == MatrixKind::rpm && (cfg.series_lo != 0.0 || cfg.series_hi != 1.0))
        throw std::invalid_argument("config: rpm requires series bounds [0,1]");
    if (!(cfg.series_lo < cfg.series_hi) || !(cfg.matrix_lo < cfg.matrix_hi))
        throw std::invalid_argument("config: bounds must be ordered");
    if (cfg.patch_size < 3 || cfg.patch_size % 2 == 0)
        throw std::invalid_argument("config: patch size must be odd and >= 3");
}

std::string config_to_string(const ModelConfig& cfg) {
    std::ostringstream os;
    os << matrix_kind_name(cfg.kind) << (cfg.differenced ? "+diff" : "") << " bounds=["
       << cfg.series_lo << ',' << cfg.series_hi << "] patch=" << cfg.patch_size << " enc="
       << technique_name(cfg.technique) << " est=" << estimator_variant_name(cfg.estimator);
    return os.str();
}

ModelConfig parse_config_file(std::istream& in) {
    ModelConfig cfg;
    bool have_kind = false;
    bool have_bounds = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "transform") {
            cfg.kind = matrix_kind_from_name(value);
            have_kind = true;
        } else if (key == "differenced") {
            cfg.differenced = (value == "1" || value == "true" || value == "yes");
        } else if (key == "patch") {
            cfg.patch_size = std::stoi(value);
        } else if (key == "encoding") {
            cfg.technique = technique_from_name(value);
        } else if (key == "estimator") {
            cfg.estimator = estimator_variant_from_name(value);
        } else if (key == "series_lo") {
            cfg.series_lo = std::stod(value);
            have_bounds = true;
        } else if (key == "series_hi") {
            cfg.series_hi = std::stod(value);
            have_bounds = true;
        } else if (key == "matrix_lo") {
            cfg.matrix_lo = std::stod(value);
        } else if (key == "matrix_hi") {
            cfg.matrix_hi = std::stod(value);
        } else {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
        }
    }
    if (!have_kind)
        throw std::invalid_argument("config: missing 'transform' key");
    if (!have_bounds) // unspecified bounds follow the transform
        apply_kind_bounds(cfg);
    check_kind_bounds(cfg);
    return cfg;
}

void write_config_file(const ModelConfig& cfg, std::ostream& os) {
    os << "transform = " << matrix_kind_name(cfg.kind) << '\n'
       << "differenced = " << (cfg.differenced ? 1 : 0) << '\n'
       << "series_lo = " << fmt17(cfg.series_lo) << '\n'
       << "series_hi = " << fmt17(cfg.series_hi) << '\n'
       << "matrix_lo = " << fmt17(cfg.matrix_lo) << '\n'
       << "matrix_hi = " << fmt17(cfg.matrix_hi) << '\n'
       << "encoding = " << technique_name(cfg.technique) << '\n'
       << "patch = " << cfg.patch_size << '\n'
       << "estimator = " << estimator_variant_name(cfg.estimator) << '\n';
}

void ModelLog::write_csv(std::ostream& os) const {
    os << "prefix_len,transform,differenced,series_lo,series_hi,patch,estimator,smape,flag\n";
    for (const auto& r : rows) {
        os << r.prefix_len << ',' << matrix_kind_name(r.config.kind) << ','
           << (r.config.differenced ? 1 : 0) << ',' << fmt17(r.config.series_lo) << ','
           << fmt17(r.config.series_hi) << ',' << r.config.patch_size << ','
           << estimator_variant_name(r.config.estimator) << ','
           << (r.feasible ? fmt17(r.smape) : std::string("inf")) << ','
           << (r.feasible ? "ok" : "infeasible") << '\n';
    }
}

ConfigSpace ConfigSpace::defaults() {
    ConfigSpace s;
    s.kinds = {MatrixKind::stam, MatrixKind::mac,  MatrixKind::gasf, MatrixKind::gc,
               MatrixKind::gcs1, MatrixKind::gcs2, MatrixKind::rpm};
    s.differenced = {false, true};
    s.patch_sizes = {3, 5, 7, 9, 11};
    s.techniques = {EncodingTechnique::dynamic};
    s.estimators = {EstimatorVariant::standard};
    s.min_prefix = 12;
    return s;
}

std::vector<ModelConfig> ConfigSpace::enumerate() const {
    std::vector<ModelConfig> out;
    for (const MatrixKind kind : kinds)
        for (const bool diff : differenced)
            for (const int patch : patch_sizes)
                for (const EncodingTechnique tech : techniques)
                    for (const EstimatorVariant est : estimators) {
                        ModelConfig cfg;
                        cfg.kind = kind;
                        cfg.differenced = diff;
                        cfg.patch_size = patch;
                        cfg.technique = tech;
                        cfg.estimator = est;
                        apply_kind_bounds(cfg);
                        out.push_back(cfg);
                    }
    return out;
}

int exploration_horizon(int declared_horizon, const ConfigSpace& space) {
    const int cap = std::max(1, space.min_prefix / 3);
    return std::clamp(declared_horizon, 1, cap);
}

std::vector<double> forecast_values(const std::vector<double>& history, const ModelConfig& cfg,
                                    int h, std::vector<FillRecord>* fill_log) {
    if (h < 0)
        throw std::invalid_argument("forecast: negative horizon");
    if (h == 0) return {};
    check_kind_bounds(cfg);

    // Phase 1: optional mean-removal differencing, then rescale into the
    // transform's working interval.
    std::vector<double> base;
    double last_value = 0.0;
    try {
        if (history.size() < 2)
            throw std::invalid_argument("need at least 2 points");
        last_value = history.back();
        if (cfg.differenced) {
            auto [diffs, anchor] = difference(history);
            (void)anchor;
            if (diffs.size() < 2)
                throw std::invalid_argument("too short after differencing");
            base = std::move(diffs);
        } else {
            base = history;
        }
    } catch (const std::exception& e) {
        stage_fail("prepare", e);
    }

    std::vector<double> scaled;
    ScalingRecord series_rec;
    try {
        auto [sv, rec] = minmax_scale(base, cfg.series_lo, cfg.series_hi);
        scaled = std::move(sv);
        series_rec = rec;
        series_rec.differenced = cfg.differenced;
        series_rec.anchor = history.front();
    } catch (const std::exception& e) {
        stage_fail("scale", e);
    }

    // Phase 2: matrix representation with the forecast band attached.
    MatrixRepr extended;
    RegionMask mask;
    try {
        MatrixRepr m = make_matrix(cfg.kind, scaled);
        auto [ext, msk] = extend_for_forecast(m, h);
        extended = std::move(ext);
        mask = std::move(msk);
    } catch (const std::exception& e) {
        stage_fail("transform", e);
    }

    // Matrix-level rescale of the known block into the encoding interval.
    TransformContext ctx;
    ctx.kind = cfg.kind;
    ctx.clamp_eps = kGcClampEps;
    std::vector<double> image_values;
    try {
        std::vector<double> known_vals;
        known_vals.reserve(extended.data.size());
        for (std::size_t i = 0; i < extended.data.size(); ++i)
            if (mask.known[i]) known_vals.push_back(extended.data[i]);
        auto [scaled_known, mrec] = minmax_scale(known_vals, cfg.matrix_lo, cfg.matrix_hi);
        ctx.matrix_scaling = mrec;
        image_values.assign(extended.data.size(), 0.0);
        std::size_t next = 0;
        for (std::size_t i = 0; i < extended.data.size(); ++i)
            if (mask.known[i]) image_values[i] = scaled_known[next++];
    } catch (const std::exception& e) {
        stage_fail("rescale", e);
    }

    // Image encoding: the inpainting engine runs on decoded real values, so
    // encode/decode here applies exactly the technique's quantization.
    EncodingSpec spec;
    try {
        if (cfg.technique == EncodingTechnique::minimal_dict) {
            std::vector<double> known_vals;
            for (std::size_t i = 0; i < image_values.size(); ++i)
                if (mask.known[i]) known_vals.push_back(image_values[i]);
            spec = make_minimal_dict_spec(known_vals, cfg.matrix_lo, cfg.matrix_hi);
        } else {
            spec.technique = cfg.technique;
            spec.value_lo = cfg.matrix_lo;
            spec.value_hi = cfg.matrix_hi;
        }
        const ImageGrid img = encode(image_values, mask.known.data(), extended.side,
                                     extended.side, spec);
        std::vector<double> decoded = decode(img, spec);
        for (std::size_t i = 0; i < decoded.size(); ++i)
            if (mask.known[i]) image_values[i] = decoded[i];
    } catch (const std::exception& e) {
        stage_fail("encode", e);
    }

    // Phase 3: border extrapolation by patch inpainting.
    std::vector<double> filled;
    try {
        PatchConfig pcfg;
        pcfg.patch_size = cfg.patch_size;
        auto [values, log] = inpaint(image_values, mask.known, extended.side, extended.side, pcfg);
        if (fill_log) *fill_log = std::move(log);
        filled = std::move(values);
    } catch (const std::exception& e) {
        stage_fail("inpaint", e);
    }

    // Phase 4: back through every scaling step.
    try {
        MatrixRepr restored = extended;
        restored.data = unscale(filled, ctx.matrix_scaling);
        const ForecastExtraction ext =
            extract_forecast(restored, ctx, scaled, h, cfg.estimator);
        std::vector<double> out = unscale(ext.values, series_rec);
        if (cfg.differenced) {
            std::vector<double> cum(out.size());
            double running = last_value;
            for (std::size_t i = 0; i < out.size(); ++i) {
                running += out[i];
                cum[i] = running;
            }
            return cum;
        }
        return out;
    } catch (const std::exception& e) {
        stage_fail("extract", e);
    }
}

std::vector<double> forecast(const TimeSeries& series, const ModelConfig& cfg, int h) {
    validate(series);
    return forecast_values(series.values, cfg, h);
}

ModelLog grid_search(const TimeSeries& train, const ConfigSpace& space, int pseudo_h) {
    validate(train);
    if (pseudo_h < 1)
        throw std::invalid_argument("grid_search: pseudo horizon must be >= 1");
    const int len = train.length();
    if (len < space.min_prefix + pseudo_h)
        throw std::runtime_error("grid_search: train too short for exploration (need " +
                                 std::to_string(space.min_prefix + pseudo_h) + " points, have " +
                                 std::to_string(len) + ")");

    const std::vector<ModelConfig> configs = space.enumerate();
    const int n_prefix = len - pseudo_h - space.min_prefix + 1;
    const int n_cfg = static_cast<int>(configs.size());
    std::vector<double> scores(static_cast<std::size_t>(n_prefix) * n_cfg, kInf);

    // Grid points are independent; scores are committed in config-space
    // order afterwards so the log is identical for any thread count.
#pragma omp parallel for collapse(2) schedule(dynamic)
    for (int p = 0; p < n_prefix; ++p) {
        for (int c = 0; c < n_cfg; ++c) {
            const int prefix_len = space.min_prefix + p;
            std::vector<double> prefix(train.values.begin(), train.values.begin() + prefix_len);
            double score = kInf;
            try {
                const auto fc = forecast_values(prefix, configs[c], pseudo_h);
                std::span<const double> actual(train.values.data() + prefix_len,
                                               static_cast<std::size_t>(pseudo_h));
                const MetricsRow row = metrics(fc, actual);
                if (row.smape && std::isfinite(*row.smape)) score = *row.smape;
            } catch (const std::exception&) {
                // infeasible for this prefix; logged as such
            }
            scores[static_cast<std::size_t>(p) * n_cfg + c] = score;
        }
    }

    ModelLog log;
    log.rows.reserve(scores.size());
    for (int p = 0; p < n_prefix; ++p) {
        std::vector<LogRow> block;
        block.reserve(n_cfg);
        for (int c = 0; c < n_cfg; ++c) {
            LogRow row;
            row.prefix_len = space.min_prefix + p;
            row.config = configs[c];
            row.smape = scores[static_cast<std::size_t>(p) * n_cfg + c];
            row.feasible = std::isfinite(row.smape);
            block.push_back(row);
        }
        std::stable_sort(block.begin(), block.end(),
                         [](const LogRow& a, const LogRow& b) { return a.smape < b.smape; });
        for (int i = 0; i < n_cfg; ++i) {
            block[i].rank = i + 1;
            log.rows.push_back(block[i]);
        }
    }
    return log;
}

namespace {

ModelConfig mine_frequent(const std::vector<const LogRow*>& rows) {
    constexpr int kTopK = 3;
    struct Tally {
        int count = 0;
        double smape_sum = 0.0;
    };
    std::map<ModelConfig, Tally> tally;
    for (const LogRow* r : rows) {
        if (!r->feasible || r->rank > kTopK) continue;
        auto& t = tally[r->config];
        ++t.count;
        t.smape_sum += r->smape;
    }
    if (tally.empty())
        throw std::runtime_error("no feasible model");

    const ModelConfig* best = nullptr;
    double best_mean = kInf;
    int best_count = -1;
    for (const auto& [cfg, t] : tally) {
        const double mean = t.smape_sum / t.count;
        // Highest occurrence wins; ties fall to lower mean sMAPE, then to
        // the map's config ordering (already iterated in order).
        if (t.count > best_count || (t.count == best_count && mean < best_mean)) {
            best = &cfg;
            best_count = t.count;
            best_mean = mean;
        }
    }
    return *best;
}

} // namespace

ModelConfig select_frequent(const ModelLog& log) {
    std::vector<const LogRow*> rows;
    rows.reserve(log.rows.size());
    for (const auto& r : log.rows) rows.push_back(&r);
    return mine_frequent(rows);
}

OracleBest oracle_best(const TimeSeries& train, const ConfigSpace& space,
                       std::span<const double> actual_tail) {
    validate(train);
    if (actual_tail.empty())
        throw std::invalid_argument("oracle_best: empty tail");
    const int h = static_cast<int>(actual_tail.size());
    const std::vector<ModelConfig> configs = space.enumerate();
    const int n_cfg = static_cast<int>(configs.size());
    std::vector<double> scores(n_cfg, kInf);

#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < n_cfg; ++c) {
        try {
            const auto fc = forecast_values(train.values, configs[c], h);
            const MetricsRow row = metrics(fc, actual_tail);
            if (row.smape && std::isfinite(*row.smape)) scores[c] = *row.smape;
        } catch (const std::exception&) {
        }
    }

    int best = -1;
    for (int c = 0; c < n_cfg; ++c)
        if (best < 0 || scores[c] < scores[best]) best = c;
    if (best < 0 || !std::isfinite(scores[best]))
        throw std::runtime_error("no feasible model");
    return {configs[best], scores[best]};
}

ModelConfig select_short_memory(const ModelLog& log, int window) {
    if (window < 1)
        throw std::invalid_argument("select_short_memory: window must be >= 1");
    std::set<int> prefixes;
    for (const auto& r : log.rows) prefixes.insert(r.prefix_len);
    if (prefixes.empty())
        throw std::runtime_error("no feasible model");
    std::vector<int> ordered(prefixes.begin(), prefixes.end());
    const std::size_t keep = std::min<std::size_t>(ordered.size(), static_cast<std::size_t>(window));
    const std::set<int> recent(ordered.end() - static_cast<long>(keep), ordered.end());

    std::vector<const LogRow*> rows;
    for (const auto& r : log.rows)
        if (recent.count(r.prefix_len)) rows.push_back(&r);
    return mine_frequent(rows);
}

} // namespace fm2i
