#include "fm2i/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace fm2i {
namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Out-of-range rejection leaves a little slack for float noise from the
// upstream affine rescale.
constexpr double kRangeSlack = 1e-9;

double to_unit(double v, const EncodingSpec& spec) {
    const double range = spec.value_hi - spec.value_lo;
    if (!(range > 0.0))
        throw std::invalid_argument("encode: value_lo must be < value_hi");
    const double t = (v - spec.value_lo) / range;
    if (t < -kRangeSlack || t > 1.0 + kRangeSlack)
        throw std::invalid_argument("encode: known value outside encoded range");
    return std::clamp(t, 0.0, 1.0);
}

std::uint32_t encode_one(double v, const EncodingSpec& spec) {
    switch (spec.technique) {
    case EncodingTechnique::dynamic:
    case EncodingTechnique::static_dict: {
        // Same affine bijection either way; the static dictionary is just
        // this map materialized lazily per code.
        const double t = to_unit(v, spec);
        return static_cast<std::uint32_t>(std::llround(t * static_cast<double>(kMaxCode)));
    }
    case EncodingTechnique::gray256: {
        const double t = to_unit(v, spec);
        const int g = static_cast<int>(std::llround(t * 255.0));
        return pack_rgb(g, g, g);
    }
    case EncodingTechnique::minimal_dict: {
        if (spec.dict.empty())
            throw std::invalid_argument("encode: minimal_dict spec has no dictionary");
        const auto it = std::lower_bound(spec.dict.begin(), spec.dict.end(), v);
        if (it == spec.dict.end() || *it != v)
            throw std::invalid_argument("encode: value not present in minimal dictionary");
        return static_cast<std::uint32_t>(it - spec.dict.begin());
    }
    }
    throw std::invalid_argument("encode: bad technique");
}

double decode_one(std::uint32_t code, const EncodingSpec& spec) {
    const double range = spec.value_hi - spec.value_lo;
    switch (spec.technique) {
    case EncodingTechnique::dynamic:
    case EncodingTechnique::static_dict:
        return spec.value_lo + static_cast<double>(code) / static_cast<double>(kMaxCode) * range;
    case EncodingTechnique::gray256: {
        const int g = static_cast<int>(code >> 16) & 0xff;
        return spec.value_lo + static_cast<double>(g) / 255.0 * range;
    }
    case EncodingTechnique::minimal_dict: {
        if (spec.dict.empty())
            throw std::invalid_argument("decode: minimal_dict spec has no dictionary");
        // Codes outside the dictionary clamp to its last entry; this is the
        // documented information-loss weakness of the technique.
        const std::size_t idx = std::min<std::size_t>(code, spec.dict.size() - 1);
        return spec.dict[idx];
    }
    }
    throw std::invalid_argument("decode: bad technique");
}

} // namespace

const char* technique_name(EncodingTechnique t) {
    switch (t) {
    case EncodingTechnique::static_dict: return "static_dict";
    case EncodingTechnique::minimal_dict: return "minimal_dict";
    case EncodingTechnique::gray256: return "gray256";
    case EncodingTechnique::dynamic: return "dynamic";
    }
    return "?";
}

EncodingTechnique technique_from_name(const std::string& name) {
    if (name == "static_dict") return EncodingTechnique::static_dict;
    if (name == "minimal_dict") return EncodingTechnique::minimal_dict;
    if (name == "gray256") return EncodingTechnique::gray256;
    if (name == "dynamic") return EncodingTechnique::dynamic;
    throw std::invalid_argument("unknown encoding technique: " + name);
}

std::uint32_t pack_rgb(int r, int g, int b) {
    return static_cast<std::uint32_t>(r) * 65536u + static_cast<std::uint32_t>(g) * 256u +
           static_cast<std::uint32_t>(b);
}

void unpack_rgb(std::uint32_t code, int& r, int& g, int& b) {
    r = static_cast<int>((code >> 16) & 0xff);
    g = static_cast<int>((code >> 8) & 0xff);
    b = static_cast<int>(code & 0xff);
}

EncodingSpec make_minimal_dict_spec(std::span<const double> values, double lo, double hi) {
    EncodingSpec spec;
    spec.technique = EncodingTechnique::minimal_dict;
    spec.value_lo = lo;
    spec.value_hi = hi;
    spec.dict.assign(values.begin(), values.end());
    std::sort(spec.dict.begin(), spec.dict.end());
    spec.dict.erase(std::unique(spec.dict.begin(), spec.dict.end()), spec.dict.end());
    if (spec.dict.size() > kMaxCode + 1)
        throw std::invalid_argument("make_minimal_dict_spec: too many distinct values");
    return spec;
}

ImageGrid encode(std::span<const double> values, const std::uint8_t* mask,
                 int width, int height, const EncodingSpec& spec) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("encode: bad dimensions");
    const std::size_t n = static_cast<std::size_t>(width) * height;
    if (values.size() != n)
        throw std::invalid_argument("encode: value count does not match dimensions");

    ImageGrid img;
    img.width = width;
    img.height = height;
    img.codes.assign(n, 0u);
    img.known.assign(n, 1u);
    for (std::size_t i = 0; i < n; ++i) {
        if (mask && mask[i] == 0) {
            img.known[i] = 0;
            continue;
        }
        img.codes[i] = encode_one(values[i], spec);
    }
    return img;
}

std::vector<double> decode(const ImageGrid& img, const EncodingSpec& spec) {
    std::vector<double> out(img.size());
    for (std::size_t i = 0; i < img.size(); ++i)
        out[i] = decode_one(img.codes[i], spec);
    return out;
}

void export_ppm(const ImageGrid& img, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f)
        throw std::runtime_error("export_ppm: cannot open " + path);
    std::fprintf(f.get(), "P6\n%d %d\n255\n", img.width, img.height);
    std::vector<unsigned char> row(static_cast<std::size_t>(img.width) * 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * img.width + x;
            int r, g, b;
            if (img.known[i]) {
                unpack_rgb(img.codes[i], r, g, b);
            } else {
                r = 255; g = 0; b = 255; // magenta marks unknown cells
            }
            row[static_cast<std::size_t>(x) * 3 + 0] = static_cast<unsigned char>(r);
            row[static_cast<std::size_t>(x) * 3 + 1] = static_cast<unsigned char>(g);
            row[static_cast<std::size_t>(x) * 3 + 2] = static_cast<unsigned char>(b);
        }
        if (std::fwrite(row.data(), 1, row.size(), f.get()) != row.size())
            throw std::runtime_error("export_ppm: write failed for " + path);
    }
}

ImageGrid import_ppm(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f)
        throw std::runtime_error("import_ppm: cannot open " + path);
    char magic[3] = {};
    int width = 0, height = 0, maxval = 0;
    if (std::fscanf(f.get(), "%2s %d %d %d", magic, &width, &height, &maxval) != 4 ||
        std::string(magic) != "P6" || maxval != 255 || width <= 0 || height <= 0)
        throw std::runtime_error("import_ppm: unsupported header in " + path);
    std::fgetc(f.get()); // single whitespace after maxval

    ImageGrid img;
    img.width = width;
    img.height = height;
    const std::size_t n = static_cast<std::size_t>(width) * height;
    img.codes.resize(n);
    img.known.assign(n, 1u);
    std::vector<unsigned char> raw(n * 3);
    if (std::fread(raw.data(), 1, raw.size(), f.get()) != raw.size())
        throw std::runtime_error("import_ppm: truncated pixel data in " + path);
    for (std::size_t i = 0; i < n; ++i)
        img.codes[i] = pack_rgb(raw[i * 3], raw[i * 3 + 1], raw[i * 3 + 2]);
    return img;
}

} // namespace fm2i
