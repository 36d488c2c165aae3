#pragma once

namespace skyfeel {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace skyfeel
