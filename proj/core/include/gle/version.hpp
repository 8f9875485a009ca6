#pragma once

namespace gle {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gle
