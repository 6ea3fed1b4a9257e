#pragma once

namespace hypertrace {

inline constexpr const char* tool_version = "0.1.0";
inline constexpr int format_version = 1;

} // namespace hypertrace
