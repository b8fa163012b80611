#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fm2i/inpaint.hpp"
#include "fm2i/reference.hpp"
#include "test_util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <random>
#include <sstream>

using namespace fm2i;

namespace {

struct Image {
    int side = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> mask;
};

Image random_image_with_hole(int side, unsigned seed, int hole_r0, int hole_c0, int hole_side) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    Image img;
    img.side = side;
    img.values.resize(static_cast<std::size_t>(side) * side);
    img.mask.assign(img.values.size(), 1);
    for (auto& v : img.values) v = dist(rng);
    for (int r = hole_r0; r < hole_r0 + hole_side; ++r)
        for (int c = hole_c0; c < hole_c0 + hole_side; ++c) {
            img.values[static_cast<std::size_t>(r) * side + c] = 0.0;
            img.mask[static_cast<std::size_t>(r) * side + c] = 0;
        }
    return img;
}

} // namespace

TEST_CASE("constant image fills constant exactly") {
    Image img;
    img.side = 12;
    img.values.assign(144, 0.37);
    img.mask.assign(144, 1);
    for (int r = 4; r < 9; ++r)
        for (int c = 3; c < 8; ++c) {
            img.values[static_cast<std::size_t>(r) * 12 + c] = 0.0;
            img.mask[static_cast<std::size_t>(r) * 12 + c] = 0;
        }
    PatchConfig cfg;
    cfg.patch_size = 3;
    auto [filled, log] = inpaint(img.values, img.mask, 12, 12, cfg);
    for (double v : filled) CHECK(v == 0.37);
    CHECK(!log.empty());
}

TEST_CASE("periodic vertical stripes are continued exactly") {
    // stripe value depends on column mod 3; patch span 3 divides the period
    const int side = 18;
    const double palette[3] = {0.2, 0.5, 0.8};
    Image img;
    img.side = side;
    img.values.resize(static_cast<std::size_t>(side) * side);
    img.mask.assign(img.values.size(), 1);
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c)
            img.values[static_cast<std::size_t>(r) * side + c] = palette[c % 3];
    std::vector<double> expect = img.values;
    for (int r = 6; r < 12; ++r)
        for (int c = 6; c < 12; ++c) {
            img.values[static_cast<std::size_t>(r) * side + c] = 0.0;
            img.mask[static_cast<std::size_t>(r) * side + c] = 0;
        }
    PatchConfig cfg;
    cfg.patch_size = 3;
    cfg.search = PatchConfig::Search::full_known;
    auto [filled, log] = inpaint(img.values, img.mask, side, side, cfg);
    CHECK(filled == expect);
}

TEST_CASE("single unknown cell takes the center of the argmin-SSD patch") {
    for (unsigned seed = 0; seed < 10; ++seed) {
        Image img = random_image_with_hole(16, 1000 + seed, 7, 8, 1);
        PatchConfig cfg;
        cfg.patch_size = 5;
        cfg.search = PatchConfig::Search::full_known;

        FillState state = make_fill_state(img.values, img.mask, 16, 16);
        const auto oracle = reference::best_patch_exhaustive(state, 7, 8, cfg.patch_size);
        REQUIRE(oracle.has_value());

        auto [filled, log] = inpaint(img.values, img.mask, 16, 16, cfg);
        REQUIRE(log.size() == 1);
        CHECK(log[0].source_row == oracle->row);
        CHECK(log[0].source_col == oracle->col);
        CHECK(filled[7 * 16 + 8] ==
              img.values[static_cast<std::size_t>(oracle->row) * 16 + oracle->col]);
    }
}

TEST_CASE("best_patch matches the exhaustive oracle on random instances") {
    for (unsigned seed = 0; seed < 25; ++seed) {
        std::mt19937 rng(3000 + seed);
        const int side = 20;
        Image img = random_image_with_hole(side, 3000 + seed, 4 + static_cast<int>(rng() % 6),
                                           4 + static_cast<int>(rng() % 6),
                                           3 + static_cast<int>(rng() % 5));
        FillState state = make_fill_state(img.values, img.mask, side, side);
        PatchConfig cfg;
        cfg.patch_size = 1 + 2 * (1 + static_cast<int>(rng() % 3)); // 3,5,7
        cfg.search = PatchConfig::Search::full_known;

        // probe several front cells
        for (int r = 0; r < side; ++r)
            for (int c = 0; c < side; ++c) {
                if (state.is_known(r, c)) continue;
                const bool on_front =
                    (r > 0 && state.is_known(r - 1, c)) || (r + 1 < side && state.is_known(r + 1, c)) ||
                    (c > 0 && state.is_known(r, c - 1)) || (c + 1 < side && state.is_known(r, c + 1));
                if (!on_front) continue;
                const auto got = best_patch(state, r, c, cfg);
                const auto want = reference::best_patch_exhaustive(state, r, c, cfg.patch_size);
                REQUIRE(want.has_value());
                CHECK(got.row == want->row);
                CHECK(got.col == want->col);
                CHECK(got.ssd == want->ssd);
            }
    }
}

TEST_CASE("zero-SSD ties pick the smallest row-major source index") {
    // constant image: every candidate has SSD 0, so the first valid source
    // window center in row-major order must win
    std::vector<double> values(15 * 15, 0.6);
    std::vector<std::uint8_t> mask(225, 1);
    for (int r = 9; r < 12; ++r)
        for (int c = 9; c < 12; ++c) mask[static_cast<std::size_t>(r) * 15 + c] = 0;
    FillState state = make_fill_state(values, mask, 15, 15);
    PatchConfig cfg;
    cfg.patch_size = 3;
    cfg.search = PatchConfig::Search::full_known;
    const PatchChoice choice = best_patch(state, 9, 9, cfg);
    CHECK(choice.row == 1);
    CHECK(choice.col == 1);
    CHECK(choice.ssd == 0.0);
}

TEST_CASE("priority favors better-surrounded cells and floors flat gradients") {
    // known everywhere except a 4x4 hole; corner of the hole has 3/4 known
    // neighborhood vs roughly half for a mid-edge cell
    Image img;
    img.side = 12;
    img.values.assign(144, 0.0);
    img.mask.assign(144, 1);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (auto& v : img.values) v = dist(rng);
    for (int r = 4; r < 8; ++r)
        for (int c = 4; c < 8; ++c) img.mask[static_cast<std::size_t>(r) * 12 + c] = 0;
    FillState state = make_fill_state(img.values, img.mask, 12, 12);
    PatchConfig cfg;
    cfg.patch_size = 3;

    // hole corner: patch loses itself plus 3 hole cells -> 5/9 known;
    // a mid-edge cell loses 6 -> 3/9, so the corner ranks higher
    const double corner_conf = [&] {
        double c = 0.0;
        int n = 0;
        for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc) {
                ++n;
                if (state.is_known(4 + dr, 4 + dc)) c += 1.0;
            }
        return c / n;
    }();
    CHECK(corner_conf == doctest::Approx(5.0 / 9.0));
    const double edge_conf = [&] {
        double c = 0.0;
        int n = 0;
        for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc) {
                ++n;
                if (state.is_known(4 + dr, 5 + dc)) c += 1.0;
            }
        return c / n;
    }();
    CHECK(corner_conf > edge_conf);

    // flat image: data term sits at the floor, priorities ordered by confidence
    Image flat;
    flat.side = 10;
    flat.values.assign(100, 0.5);
    flat.mask.assign(100, 1);
    for (int r = 4; r < 7; ++r)
        for (int c = 4; c < 7; ++c) flat.mask[static_cast<std::size_t>(r) * 10 + c] = 0;
    FillState fstate = make_fill_state(flat.values, flat.mask, 10, 10);
    const double p_corner = priority(fstate, 4, 4, cfg);
    const double p_edge = priority(fstate, 4, 5, cfg);
    CHECK(p_corner == doctest::Approx((5.0 / 9.0) * 0.001));
    CHECK(p_corner > p_edge);
}

TEST_CASE("determinism: identical inputs give bit-identical fills for any thread count") {
    Image img = random_image_with_hole(24, 77, 8, 9, 6);
    PatchConfig cfg;
    cfg.patch_size = 5;
    auto [a_vals, a_log] = inpaint(img.values, img.mask, 24, 24, cfg);
#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
#endif
    auto [b_vals, b_log] = inpaint(img.values, img.mask, 24, 24, cfg);
#ifdef _OPENMP
    omp_set_num_threads(saved);
#endif
    CHECK(a_vals == b_vals);
    REQUIRE(a_log.size() == b_log.size());
    for (std::size_t i = 0; i < a_log.size(); ++i) {
        CHECK(a_log[i].target_row == b_log[i].target_row);
        CHECK(a_log[i].target_col == b_log[i].target_col);
        CHECK(a_log[i].source_row == b_log[i].source_row);
        CHECK(a_log[i].source_col == b_log[i].source_col);
        CHECK(a_log[i].ssd == b_log[i].ssd);
    }
}

TEST_CASE("known cells are never modified; every step fills at least one cell") {
    Image img = random_image_with_hole(20, 55, 5, 5, 7);
    PatchConfig cfg;
    cfg.patch_size = 3;
    FillState state = make_fill_state(img.values, img.mask, 20, 20);
    std::size_t unknown = 0;
    for (auto k : img.mask) unknown += k ? 0 : 1;
    std::size_t steps = 0;
    while (inpaint_step(state, cfg)) ++steps;
    CHECK(steps <= unknown);
    for (std::size_t i = 0; i < img.mask.size(); ++i) {
        CHECK(state.known[i] == 1);
        if (img.mask[i]) CHECK(state.values[i] == img.values[i]);
    }
}

TEST_CASE("insufficient context is rejected") {
    // all-known and all-unknown inputs
    std::vector<double> v(16, 0.1);
    CHECK_THROWS_AS(inpaint(v, std::vector<std::uint8_t>(16, 1), 4, 4, PatchConfig{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(inpaint(v, std::vector<std::uint8_t>(16, 0), 4, 4, PatchConfig{}),
                    std::invalid_argument);

    // enough known cells but no fully known window
    PatchConfig cfg;
    cfg.patch_size = 3;
    std::vector<double> big(100, 0.2);
    std::vector<std::uint8_t> checker(100, 0);
    for (int r = 0; r < 10; ++r)
        for (int c = 0; c < 10; ++c)
            if ((r + c) % 2 == 0) checker[static_cast<std::size_t>(r) * 10 + c] = 1;
    CHECK_THROWS_WITH(inpaint(big, checker, 10, 10, cfg), doctest::Contains("insufficient context"));
}

TEST_CASE("fill log dumps as CSV") {
    Image img = random_image_with_hole(12, 9, 5, 5, 2);
    PatchConfig cfg;
    cfg.patch_size = 3;
    auto [vals, log] = inpaint(img.values, img.mask, 12, 12, cfg);
    std::ostringstream os;
    dump_fill_log(log, os);
    CHECK(os.str().rfind("step,target_row,target_col,source_row,source_col,ssd\n", 0) == 0);
}
