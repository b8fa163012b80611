#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fm2i {

enum class EncodingTechnique { static_dict, minimal_dict, gray256, dynamic };

const char* technique_name(EncodingTechnique t);
EncodingTechnique technique_from_name(const std::string& name);

/// Rectangular grid of 24-bit codes plus a known/unknown mask.
struct ImageGrid {
    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> codes; // row-major, R*65536 + G*256 + B
    std::vector<std::uint8_t> known;  // 1 = known

    std::size_t size() const { return codes.size(); }
};

inline constexpr std::uint32_t kMaxCode = 256u * 256u * 256u - 1u;

std::uint32_t pack_rgb(int r, int g, int b);
void unpack_rgb(std::uint32_t code, int& r, int& g, int& b);

/// How matrix values map to pixel codes over [value_lo, value_hi]. The
/// minimal_dict technique carries the sorted list of representable values.
struct EncodingSpec {
    EncodingTechnique technique = EncodingTechnique::dynamic;
    double value_lo = 0.0;
    double value_hi = 1.0;
    std::vector<double> dict; // minimal_dict only
};

/// Builds a minimal dictionary from the distinct values present in `values`.
EncodingSpec make_minimal_dict_spec(std::span<const double> values, double lo, double hi);

/// Encodes known cells into 24-bit codes; unknown cells (mask = 0) get code
/// 0 and known = 0. Pass mask = nullptr for an all-known grid. Known values
/// outside [value_lo, value_hi] are rejected.
ImageGrid encode(std::span<const double> values, const std::uint8_t* mask,
                 int width, int height, const EncodingSpec& spec);

/// Inverse of encode over every cell (the caller decides what unknown-cell
/// codes mean).
std::vector<double> decode(const ImageGrid& img, const EncodingSpec& spec);

/// Binary PPM (P6, maxval 255). Unknown cells are rendered magenta so holes
/// are visible in debug output.
void export_ppm(const ImageGrid& img, const std::string& path);
ImageGrid import_ppm(const std::string& path);

} // namespace fm2i
