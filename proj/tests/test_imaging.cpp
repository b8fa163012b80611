#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fm2i/imaging.hpp"
#include "test_util.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace fm2i;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("dynamic encoding endpoints and midpoint") {
    EncodingSpec spec; // dynamic over [0,1]
    const auto img0 = encode(std::vector<double>{0.0}, nullptr, 1, 1, spec);
    CHECK(img0.codes[0] == 0u);
    const auto img1 = encode(std::vector<double>{1.0}, nullptr, 1, 1, spec);
    CHECK(img1.codes[0] == 16777215u);
    const auto imgh = encode(std::vector<double>{0.5}, nullptr, 1, 1, spec);
    CHECK(imgh.codes[0] == 8388608u);
    int r, g, b;
    unpack_rgb(imgh.codes[0], r, g, b);
    CHECK(r == 128);
    CHECK(g == 0);
    CHECK(b == 0);
}

TEST_CASE("out-of-range known values are rejected") {
    EncodingSpec spec;
    CHECK_THROWS_AS(encode(std::vector<double>{1.5}, nullptr, 1, 1, spec), std::invalid_argument);
    CHECK_THROWS_AS(encode(std::vector<double>{-0.2}, nullptr, 1, 1, spec), std::invalid_argument);
}

TEST_CASE("dynamic and gray256 round trips stay within their quantization bounds") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(-3.0, 5.0);
    EncodingSpec dyn;
    dyn.value_lo = -3.0;
    dyn.value_hi = 5.0;
    EncodingSpec gray;
    gray.technique = EncodingTechnique::gray256;
    gray.value_lo = -3.0;
    gray.value_hi = 5.0;

    const double range = 8.0;
    std::vector<double> vals(10000);
    for (auto& v : vals) v = dist(rng);

    const auto dimg = encode(vals, nullptr, 100, 100, dyn);
    const auto dback = decode(dimg, dyn);
    const auto gimg = encode(vals, nullptr, 100, 100, gray);
    const auto gback = decode(gimg, gray);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        CHECK(std::abs(dback[i] - vals[i]) <= 0.5 / 16777215.0 * range + 1e-15);
        CHECK(std::abs(gback[i] - vals[i]) <= 0.5 / 255.0 * range + 1e-15);
    }
}

TEST_CASE("static_dict realizes the same bijection as dynamic") {
    EncodingSpec dyn;
    EncodingSpec stat;
    stat.technique = EncodingTechnique::static_dict;
    const auto vals = testutil::random_series(256, 12, 0.0, 1.0);
    const auto a = encode(vals, nullptr, 16, 16, dyn);
    const auto b = encode(vals, nullptr, 16, 16, stat);
    CHECK(a.codes == b.codes);
}

TEST_CASE("distinct codes decode to distinct values (injectivity)") {
    EncodingSpec spec;
    ImageGrid img;
    img.width = 256;
    img.height = 1;
    img.known.assign(256, 1);
    img.codes.resize(256);
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::uint32_t> dist(0, kMaxCode);
    for (auto& c : img.codes) c = dist(rng);
    const auto vals = decode(img, spec);
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t j = i + 1; j < vals.size(); ++j)
            if (img.codes[i] != img.codes[j]) CHECK(vals[i] != vals[j]);
}

TEST_CASE("minimal_dict maps only present values and restricts decoding") {
    const std::vector<double> vals{0.25, 0.5, 0.25, 0.75};
    EncodingSpec spec = make_minimal_dict_spec(vals, 0.0, 1.0);
    CHECK(spec.dict == std::vector<double>{0.25, 0.5, 0.75});
    const auto img = encode(vals, nullptr, 2, 2, spec);
    CHECK(img.codes == std::vector<std::uint32_t>{0, 1, 0, 2});
    const auto back = decode(img, spec);
    CHECK(back == vals);
    // values missing from the dictionary are rejected at encode time
    CHECK_THROWS_AS(encode(std::vector<double>{0.3, 0.5, 0.25, 0.75}, nullptr, 2, 2, spec),
                    std::invalid_argument);
}

TEST_CASE("mask is preserved through encode and unknown cells carry code 0") {
    const std::vector<double> vals{0.1, 0.2, 0.3, 0.4};
    const std::vector<std::uint8_t> mask{1, 0, 1, 0};
    EncodingSpec spec;
    const auto img = encode(vals, mask.data(), 2, 2, spec);
    CHECK(img.known == mask);
    CHECK(img.codes[1] == 0u);
    CHECK(img.codes[3] == 0u);
}

TEST_CASE("ppm export writes the documented bytes and round-trips") {
    ImageGrid white;
    white.width = 1;
    white.height = 1;
    white.codes = {pack_rgb(255, 255, 255)};
    white.known = {1};
    const auto path = temp_file("fm2i_white.ppm");
    export_ppm(white, path.string());
    std::ifstream f(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    CHECK(bytes == std::string("P6\n1 1\n255\n\xff\xff\xff", 14));

    // unknown cells render magenta
    ImageGrid mixed;
    mixed.width = 2;
    mixed.height = 2;
    mixed.codes = {pack_rgb(1, 2, 3), 0, pack_rgb(4, 5, 6), 0};
    mixed.known = {1, 0, 1, 0};
    const auto path2 = temp_file("fm2i_mixed.ppm");
    export_ppm(mixed, path2.string());
    const auto back = import_ppm(path2.string());
    CHECK(back.codes[0] == pack_rgb(1, 2, 3));
    CHECK(back.codes[1] == pack_rgb(255, 0, 255));
    CHECK(back.codes[2] == pack_rgb(4, 5, 6));

    // lossless round trip for fully known images
    ImageGrid full;
    full.width = 3;
    full.height = 2;
    full.known.assign(6, 1);
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::uint32_t> dist(0, kMaxCode);
    full.codes.resize(6);
    for (auto& c : full.codes) c = dist(rng);
    const auto path3 = temp_file("fm2i_full.ppm");
    export_ppm(full, path3.string());
    CHECK(import_ppm(path3.string()).codes == full.codes);

    std::filesystem::remove(path);
    std::filesystem::remove(path2);
    std::filesystem::remove(path3);
}
