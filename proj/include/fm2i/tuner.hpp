#pragma once

#include "fm2i/imaging.hpp"
#include "fm2i/inpaint.hpp"
#include "fm2i/series.hpp"
#include "fm2i/transforms.hpp"

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace fm2i {

/// One grid-search point: everything the pipeline needs to run.
struct ModelConfig {
    MatrixKind kind = MatrixKind::mac;
    bool differenced = false;
    double series_lo = -1.0;
    double series_hi = 1.0;
    double matrix_lo = 0.0;
    double matrix_hi = 1.0;
    EncodingTechnique technique = EncodingTechnique::dynamic;
    int patch_size = 5;
    EstimatorVariant estimator = EstimatorVariant::standard;

    friend auto operator<=>(const ModelConfig&, const ModelConfig&) = default;
};

/// Series rescale bounds each transform can invert: GASF wants [0,1], the
/// GC family needs the clamped interval, everything else takes [-1,1].
void apply_kind_bounds(ModelConfig& cfg);
void check_kind_bounds(const ModelConfig& cfg);

std::string config_to_string(const ModelConfig& cfg);

/// Key-value config file ("key = value" lines, # comments).
ModelConfig parse_config_file(std::istream& in);
void write_config_file(const ModelConfig& cfg, std::ostream& os);

struct LogRow {
    int prefix_len = 0;
    ModelConfig config;
    double smape = 0.0; // percent; +inf when infeasible
    int rank = 0;       // 1-based within the prefix
    bool feasible = true;
};

/// Append-only exploration log, sorted stably by (prefix_len, smape).
struct ModelLog {
    std::vector<LogRow> rows;

    void write_csv(std::ostream& os) const;
};

struct ConfigSpace {
    std::vector<MatrixKind> kinds;
    std::vector<bool> differenced;
    std::vector<int> patch_sizes;
    std::vector<EncodingTechnique> techniques;
    std::vector<EstimatorVariant> estimators;
    int min_prefix = 12;

    static ConfigSpace defaults();
    std::vector<ModelConfig> enumerate() const;
};

/// Progressive exploration: for every prefix of `train` (from min_prefix,
/// growing by one) and every config, forecast the next pseudo_h known
/// values through the full pipeline and log the sMAPE. Infeasible runs are
/// logged with +inf and a flag.
ModelLog grid_search(const TimeSeries& train, const ConfigSpace& space, int pseudo_h);

/// Frequent-items mining over the per-prefix top-k (k = 3) rows. Ties break
/// on lower mean sMAPE, then on config ordering.
ModelConfig select_frequent(const ModelLog& log);

/// Same rule restricted to the last `window` prefix lengths in the log.
ModelConfig select_short_memory(const ModelLog& log, int window);

/// Pseudo-horizon used during exploration: the declared horizon capped at a
/// third of the minimum prefix.
int exploration_horizon(int declared_horizon, const ConfigSpace& space);

/// End-to-end forecast: scale (and optionally difference), transform,
/// rescale, encode, extend, inpaint, decode, extract, invert. Errors carry
/// the failing stage name. Pass `fill_log` to capture the inpainting steps.
std::vector<double> forecast(const TimeSeries& series, const ModelConfig& cfg, int h);
std::vector<double> forecast_values(const std::vector<double>& history, const ModelConfig& cfg,
                                    int h, std::vector<FillRecord>* fill_log = nullptr);

/// Diagnostics: the config that would have scored best against a known
/// tail, for comparison with the mined one (the mined model is not always
/// the best-fitting model).
struct OracleBest {
    ModelConfig config;
    double smape = 0.0; // percent
};
OracleBest oracle_best(const TimeSeries& train, const ConfigSpace& space,
                       std::span<const double> actual_tail);

} // namespace fm2i
