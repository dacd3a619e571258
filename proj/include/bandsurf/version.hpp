#pragma once

namespace bandsurf {

inline constexpr const char* kVersion = "0.1.0";

} // namespace bandsurf
