#pragma once

namespace fm2i {

inline constexpr const char* kVersion = "fm2i 0.1.0";

}
