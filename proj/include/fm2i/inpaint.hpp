#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace fm2i {

/// Patch-matching parameters. `band` restricts source candidates to a
/// Chebyshev neighbourhood of the target cell; `full_known` searches every
/// fully known window. Distance is SSD over the known overlap, normalized
/// by overlap size.
struct PatchConfig {
    enum class Search { full_known, band };

    int patch_size = 5; // odd, >= 3
    Search search = Search::band;
    int band_width = -1; // -1 resolves to 4 * patch_size

    int resolved_band() const { return band_width > 0 ? band_width : 4 * patch_size; }
};

struct FillRecord {
    int step = 0;
    int target_row = 0;
    int target_col = 0;
    int source_row = 0;
    int source_col = 0;
    double ssd = 0.0;
};

/// Evolving state of one inpainting run. Confidence is 1 on initially known
/// cells; filled cells inherit the priority confidence of the step that
/// filled them.
struct FillState {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> known;
    std::vector<double> confidence;
    std::vector<FillRecord> log;

    std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * width + c; }
    bool is_known(int r, int c) const { return known[idx(r, c)] != 0; }
    bool in_bounds(int r, int c) const { return r >= 0 && r < height && c >= 0 && c < width; }
};

FillState make_fill_state(std::vector<double> values, std::vector<std::uint8_t> mask,
                          int width, int height);

/// Criminisi-style priority of a front cell: patch confidence times the
/// data term |grad I . n_perp|, data floored at 0.001.
double priority(const FillState& state, int row, int col, const PatchConfig& cfg);

struct PatchChoice {
    int row = 0;
    int col = 0;
    double ssd = 0.0; // normalized by overlap count
};

/// Argmin-SSD source patch for the target cell; ties break on smaller
/// row-major center index. Target patches are clipped at image borders;
/// source patches must be fully known and fully in bounds.
PatchChoice best_patch(const FillState& state, int target_row, int target_col,
                       const PatchConfig& cfg);

/// Fills one patch; returns false once no unknown cell remains.
bool inpaint_step(FillState& state, const PatchConfig& cfg);

/// Full greedy fill. Rejects inputs without enough known context for a
/// single source patch.
std::pair<std::vector<double>, std::vector<FillRecord>>
inpaint(const std::vector<double>& values, const std::vector<std::uint8_t>& mask,
        int width, int height, const PatchConfig& cfg);

/// CSV: step,target_row,target_col,source_row,source_col,ssd
void dump_fill_log(const std::vector<FillRecord>& log, std::ostream& os);

} // namespace fm2i
