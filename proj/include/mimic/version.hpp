#pragma once

namespace mimic {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace mimic
