#pragma once

namespace andlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace andlab
