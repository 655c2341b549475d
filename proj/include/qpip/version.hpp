// version.hpp — tool identity stamped into output file headers.
#pragma once

namespace qpip {

inline constexpr const char* kToolName = "qpip";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace qpip
