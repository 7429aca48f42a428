#pragma once

namespace superconv {

inline constexpr const char* kVersion = "0.1.0";

} // namespace superconv
