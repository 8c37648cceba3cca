#pragma once

namespace diracpq {

inline constexpr const char* version = "0.1.0";

}  // namespace diracpq
