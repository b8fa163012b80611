#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fm2i/series.hpp"
#include "test_util.hpp"

#include <stdexcept>

using namespace fm2i;

TEST_CASE("split keeps the last h values as test") {
    TimeSeries ts;
    ts.values = {1, 2, 3, 4, 5, 6, 7, 8};
    ts.id = "s";
    const SplitSeries parts = split(ts, 2);
    CHECK(parts.train.values == std::vector<double>{1, 2, 3, 4, 5, 6});
    CHECK(parts.test.values == std::vector<double>{7, 8});
}

TEST_CASE("split rejects degenerate horizons") {
    TimeSeries ts;
    ts.values = {1, 2, 3};
    CHECK_THROWS_AS(split(ts, 0), std::invalid_argument);
    CHECK_THROWS_AS(split(ts, 3), std::invalid_argument);
    CHECK_THROWS_WITH(split(ts, 5), doctest::Contains("horizon exceeds series"));
}

TEST_CASE("split preserves total length and ordering") {
    const auto vals = testutil::random_series(40, 7);
    TimeSeries ts;
    ts.values = vals;
    for (int h = 1; h < 40; ++h) {
        const SplitSeries parts = split(ts, h);
        std::vector<double> joined = parts.train.values;
        joined.insert(joined.end(), parts.test.values.begin(), parts.test.values.end());
        CHECK(joined == vals);
    }
}

TEST_CASE("minmax_scale maps endpoints and midpoints") {
    auto [scaled, rec] = minmax_scale(std::vector<double>{0, 5, 10}, -1.0, 1.0);
    CHECK(scaled[0] == doctest::Approx(-1.0));
    CHECK(scaled[1] == doctest::Approx(0.0));
    CHECK(scaled[2] == doctest::Approx(1.0));
    CHECK(rec.observed_min == 0.0);
    CHECK(rec.observed_max == 10.0);

    auto [two, rec2] = minmax_scale(std::vector<double>{2, 4}, 0.0, 1.0);
    CHECK(two == std::vector<double>{0.0, 1.0});
}

TEST_CASE("constant series scale to the interval midpoint and invert") {
    auto [scaled, rec] = minmax_scale(std::vector<double>{3, 3, 3}, 0.0, 1.0);
    CHECK(scaled == std::vector<double>{0.5, 0.5, 0.5});
    const auto back = unscale(std::vector<double>{0.5}, rec);
    CHECK(back[0] == 3.0);
}

TEST_CASE("unscale extrapolates beyond the target interval without clamping") {
    ScalingRecord rec;
    rec.observed_min = 0.0;
    rec.observed_max = 10.0;
    rec.target_lo = -1.0;
    rec.target_hi = 1.0;
    const auto back = unscale(std::vector<double>{1.2}, rec);
    CHECK(back[0] == doctest::Approx(11.0).epsilon(1e-12));
}

TEST_CASE("scale/unscale round trip within 1e-12 relative") {
    for (unsigned seed = 0; seed < 50; ++seed) {
        const auto vals = testutil::random_series(32, 100 + seed, -50.0, 150.0);
        for (const auto& [lo, hi] : {std::pair{-1.0, 1.0}, {0.0, 1.0}, {0.05, 0.95}}) {
            auto [scaled, rec] = minmax_scale(vals, lo, hi);
            for (double v : scaled) {
                CHECK(v >= lo - 1e-12);
                CHECK(v <= hi + 1e-12);
            }
            const auto back = unscale(scaled, rec);
            for (std::size_t i = 0; i < vals.size(); ++i)
                CHECK(testutil::close_rel(back[i], vals[i], 1e-12));
        }
    }
}

TEST_CASE("difference and undifference are exact inverses") {
    auto [diffs, anchor] = difference(std::vector<double>{1, 3, 6, 10});
    CHECK(diffs == std::vector<double>{2, 3, 4});
    CHECK(anchor == 1.0);
    CHECK(undifference(diffs, anchor) == std::vector<double>{1, 3, 6, 10});

    auto [zero_diffs, a2] = difference(std::vector<double>{4, 4, 4, 4});
    CHECK(zero_diffs == std::vector<double>{0, 0, 0});
    CHECK(a2 == 4.0);

    // Integer inputs reproduce bit-exact integers.
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> dist(-1000, 1000);
    for (int round = 0; round < 100; ++round) {
        std::vector<double> vals(20);
        for (auto& v : vals) v = dist(rng);
        auto [d, a] = difference(vals);
        CHECK(undifference(d, a) == vals);
    }
}

TEST_CASE("difference rejects short input") {
    CHECK_THROWS_AS(difference(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("validate enforces length and finiteness") {
    TimeSeries ts;
    ts.values = {1.0};
    CHECK_THROWS_AS(validate(ts), std::invalid_argument);
    ts.values = {1.0, std::nan("")};
    CHECK_THROWS_AS(validate(ts), std::invalid_argument);
    ts.values = {1.0, 2.0};
    CHECK_NOTHROW(validate(ts));
}
