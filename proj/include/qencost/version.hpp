#pragma once

namespace qencost {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qencost
