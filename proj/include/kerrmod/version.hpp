#pragma once

namespace kerrmod {

inline constexpr const char* kVersion = "0.1.0";

} // namespace kerrmod
