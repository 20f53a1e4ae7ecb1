#pragma once

namespace rquant {

inline constexpr const char* kToolName = "rquant";
inline constexpr const char* kVersion = "0.1.0";

} // namespace rquant
