#pragma once

namespace qlab {

inline constexpr const char* kVersion = "0.1.0";

} // namespace qlab
