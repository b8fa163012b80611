#include "fm2i/inpaint.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fm2i {
namespace {

constexpr double kDataFloor = 0.001;

struct Offset {
    int dr;
    int dc;
};

// Known-cell prefix sums so fully-known windows can be tested in O(1).
struct KnownSums {
    int width = 0;
    int height = 0;
    std::vector<int> sums; // (height+1) x (width+1)

    explicit KnownSums(const FillState& s) : width(s.width), height(s.height) {
        sums.assign(static_cast<std::size_t>(height + 1) * (width + 1), 0);
        for (int r = 0; r < height; ++r)
            for (int c = 0; c < width; ++c)
                at(r + 1, c + 1) = (s.known[s.idx(r, c)] ? 1 : 0) + at(r, c + 1) + at(r + 1, c) - at(r, c);
    }

    int& at(int r, int c) { return sums[static_cast<std::size_t>(r) * (width + 1) + c]; }
    int at(int r, int c) const { return sums[static_cast<std::size_t>(r) * (width + 1) + c]; }

    int count(int r0, int c0, int r1, int c1) const { // inclusive box
        return at(r1 + 1, c1 + 1) - at(r0, c1 + 1) - at(r1 + 1, c0) + at(r0, c0);
    }
};

double patch_confidence(const FillState& state, int row, int col, int patch_size) {
    const int hp = patch_size / 2;
    double sum = 0.0;
    int cells = 0;
    for (int dr = -hp; dr <= hp; ++dr)
        for (int dc = -hp; dc <= hp; ++dc) {
            const int r = row + dr;
            const int c = col + dc;
            if (!state.in_bounds(r, c)) continue;
            ++cells;
            if (state.is_known(r, c)) sum += state.confidence[state.idx(r, c)];
        }
    return cells > 0 ? sum / cells : 0.0;
}

double data_term(const FillState& state, int row, int col) {
    // Image gradient from central differences over known cells only.
    double gr = 0.0, gc = 0.0;
    if (state.in_bounds(row - 1, col) && state.in_bounds(row + 1, col) &&
        state.is_known(row - 1, col) && state.is_known(row + 1, col))
        gr = 0.5 * (state.values[state.idx(row + 1, col)] - state.values[state.idx(row - 1, col)]);
    if (state.in_bounds(row, col - 1) && state.in_bounds(row, col + 1) &&
        state.is_known(row, col - 1) && state.is_known(row, col + 1))
        gc = 0.5 * (state.values[state.idx(row, col + 1)] - state.values[state.idx(row, col - 1)]);

    // Front normal from the mask gradient; out-of-bounds counts as unknown.
    auto known01 = [&](int r, int c) -> double {
        return state.in_bounds(r, c) && state.is_known(r, c) ? 1.0 : 0.0;
    };
    double nr = 0.5 * (known01(row + 1, col) - known01(row - 1, col));
    double nc = 0.5 * (known01(row, col + 1) - known01(row, col - 1));
    const double norm = std::hypot(nr, nc);
    if (norm == 0.0) return kDataFloor;
    nr /= norm;
    nc /= norm;
    // Isophote strength: gradient dotted with the rotated normal.
    const double d = std::abs(gr * (-nc) + gc * nr);
    return std::max(d, kDataFloor);
}

std::vector<Offset> overlap_offsets(const FillState& state, int row, int col, int patch_size) {
    const int hp = patch_size / 2;
    std::vector<Offset> offsets;
    offsets.reserve(static_cast<std::size_t>(patch_size) * patch_size);
    for (int dr = -hp; dr <= hp; ++dr)
        for (int dc = -hp; dc <= hp; ++dc) {
            const int r = row + dr;
            const int c = col + dc;
            if (state.in_bounds(r, c) && state.is_known(r, c))
                offsets.push_back({dr, dc});
        }
    return offsets;
}

std::vector<int> candidate_centers(const FillState& state, const KnownSums& sums,
                                   int target_row, int target_col, const PatchConfig& cfg,
                                   bool band) {
    const int hp = cfg.patch_size / 2;
    int r0 = hp, r1 = state.height - 1 - hp;
    int c0 = hp, c1 = state.width - 1 - hp;
    if (band) {
        const int bw = cfg.resolved_band();
        r0 = std::max(r0, target_row - bw);
        r1 = std::min(r1, target_row + bw);
        c0 = std::max(c0, target_col - bw);
        c1 = std::min(c1, target_col + bw);
    }
    std::vector<int> centers;
    const int full = cfg.patch_size * cfg.patch_size;
    for (int r = r0; r <= r1; ++r)
        for (int c = c0; c <= c1; ++c)
            if (sums.count(r - hp, c - hp, r + hp, c + hp) == full)
                centers.push_back(static_cast<int>(state.idx(r, c)));
    return centers;
}

struct RawChoice {
    double raw = std::numeric_limits<double>::infinity();
    int center = std::numeric_limits<int>::max();

    bool beats(const RawChoice& other) const {
        return raw < other.raw || (raw == other.raw && center < other.center);
    }
};

RawChoice search_candidates(const FillState& state, const std::vector<int>& centers,
                            int target_row, int target_col, const std::vector<Offset>& overlap) {
    const int count = static_cast<int>(centers.size());
    RawChoice best;
    // Per-step searches are tiny for desk-scale images; threads only pay off
    // once the candidate-by-overlap product is large.
#pragma omp parallel if (static_cast<long long>(count) * static_cast<long long>(overlap.size()) > 400000)
    {
        RawChoice local;
#pragma omp for schedule(static) nowait
        for (int ci = 0; ci < count; ++ci) {
            const int center = centers[ci];
            const int sr = center / state.width;
            const int sc = center % state.width;
            double raw = 0.0;
            for (const auto& off : overlap) {
                const double a = state.values[state.idx(target_row + off.dr, target_col + off.dc)];
                const double b = state.values[state.idx(sr + off.dr, sc + off.dc)];
                const double d = a - b;
                raw += d * d;
                if (raw > local.raw) break; // cannot beat the local best
            }
            const RawChoice cand{raw, center};
            if (cand.beats(local)) local = cand;
        }
#pragma omp critical(fm2i_patch_reduce)
        {
            // (raw, center) is a total order, so the merge result does not
            // depend on thread arrival order.
            if (local.beats(best)) best = local;
        }
    }
    return best;
}

} // namespace

FillState make_fill_state(std::vector<double> values, std::vector<std::uint8_t> mask,
                          int width, int height) {
    const std::size_t n = static_cast<std::size_t>(width) * height;
    if (width <= 0 || height <= 0 || values.size() != n || mask.size() != n)
        throw std::invalid_argument("make_fill_state: inconsistent dimensions");
    FillState state;
    state.width = width;
    state.height = height;
    state.values = std::move(values);
    state.known = std::move(mask);
    state.confidence.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (state.known[i]) state.confidence[i] = 1.0;
    return state;
}

double priority(const FillState& state, int row, int col, const PatchConfig& cfg) {
    return patch_confidence(state, row, col, cfg.patch_size) * data_term(state, row, col);
}

PatchChoice best_patch(const FillState& state, int target_row, int target_col,
                       const PatchConfig& cfg) {
    const auto overlap = overlap_offsets(state, target_row, target_col, cfg.patch_size);
    if (overlap.empty())
        throw std::invalid_argument("best_patch: target patch has no known cell");

    const KnownSums sums(state);
    std::vector<int> centers;
    if (cfg.search == PatchConfig::Search::band) {
        centers = candidate_centers(state, sums, target_row, target_col, cfg, true);
        if (centers.empty()) // widen to the whole known region for this step
            centers = candidate_centers(state, sums, target_row, target_col, cfg, false);
    } else {
        centers = candidate_centers(state, sums, target_row, target_col, cfg, false);
    }
    if (centers.empty())
        throw std::runtime_error("best_patch: no candidate source patch");

    const RawChoice best = search_candidates(state, centers, target_row, target_col, overlap);
    PatchChoice out;
    out.row = best.center / state.width;
    out.col = best.center % state.width;
    out.ssd = best.raw / static_cast<double>(overlap.size());
    return out;
}

bool inpaint_step(FillState& state, const PatchConfig& cfg) {
    // Fill front: unknown cells with a known 4-neighbour.
    int best_cell = -1;
    double best_priority = -1.0;
    for (int r = 0; r < state.height; ++r) {
        for (int c = 0; c < state.width; ++c) {
            if (state.is_known(r, c)) continue;
            const bool on_front =
                (state.in_bounds(r - 1, c) && state.is_known(r - 1, c)) ||
                (state.in_bounds(r + 1, c) && state.is_known(r + 1, c)) ||
                (state.in_bounds(r, c - 1) && state.is_known(r, c - 1)) ||
                (state.in_bounds(r, c + 1) && state.is_known(r, c + 1));
            if (!on_front) continue;
            const double p = priority(state, r, c, cfg);
            if (p > best_priority) { // ties keep the smaller row-major index
                best_priority = p;
                best_cell = static_cast<int>(state.idx(r, c));
            }
        }
    }
    if (best_cell < 0) return false;

    const int tr = best_cell / state.width;
    const int tc = best_cell % state.width;
    const PatchChoice choice = best_patch(state, tr, tc, cfg);
    const double conf = patch_confidence(state, tr, tc, cfg.patch_size);

    const int hp = cfg.patch_size / 2;
    for (int dr = -hp; dr <= hp; ++dr)
        for (int dc = -hp; dc <= hp; ++dc) {
            const int r = tr + dr;
            const int c = tc + dc;
            if (!state.in_bounds(r, c) || state.is_known(r, c)) continue;
            const std::size_t i = state.idx(r, c);
            state.values[i] = state.values[state.idx(choice.row + dr, choice.col + dc)];
            state.known[i] = 1;
            state.confidence[i] = conf;
        }

    FillRecord rec;
    rec.step = static_cast<int>(state.log.size());
    rec.target_row = tr;
    rec.target_col = tc;
    rec.source_row = choice.row;
    rec.source_col = choice.col;
    rec.ssd = choice.ssd;
    state.log.push_back(rec);
    return true;
}

std::pair<std::vector<double>, std::vector<FillRecord>>
inpaint(const std::vector<double>& values, const std::vector<std::uint8_t>& mask,
        int width, int height, const PatchConfig& cfg) {
    if (cfg.patch_size < 3 || cfg.patch_size % 2 == 0)
        throw std::invalid_argument("inpaint: patch_size must be odd and >= 3");

    FillState state = make_fill_state(values, mask, width, height);

    std::size_t known_count = 0;
    for (auto k : state.known) known_count += k ? 1 : 0;
    const std::size_t total = state.known.size();
    if (known_count == 0 || known_count == total)
        throw std::invalid_argument("inpaint: need at least one known and one unknown cell");
    if (known_count < static_cast<std::size_t>(cfg.patch_size) * cfg.patch_size)
        throw std::invalid_argument("inpaint: insufficient context");
    {
        const KnownSums sums(state);
        const int hp = cfg.patch_size / 2;
        const int full = cfg.patch_size * cfg.patch_size;
        bool has_window = false;
        for (int r = hp; r < height - hp && !has_window; ++r)
            for (int c = hp; c < width - hp; ++c)
                if (sums.count(r - hp, c - hp, r + hp, c + hp) == full) {
                    has_window = true;
                    break;
                }
        if (!has_window)
            throw std::invalid_argument("inpaint: insufficient context");
    }

    while (inpaint_step(state, cfg)) {
    }
    return {std::move(state.values), std::move(state.log)};
}

void dump_fill_log(const std::vector<FillRecord>& log, std::ostream& os) {
    os << "step,target_row,target_col,source_row,source_col,ssd\n";
    char buf[64];
    for (const auto& r : log) {
        std::snprintf(buf, sizeof(buf), "%.17g", r.ssd);
        os << r.step << ',' << r.target_row << ',' << r.target_col << ','
           << r.source_row << ',' << r.source_col << ',' << buf << '\n';
    }
}

} // namespace fm2i
