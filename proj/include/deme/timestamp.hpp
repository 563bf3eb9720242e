#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace deme {

/// UTC wall-clock time at millisecond resolution.
using Timestamp = std::chrono::time_point<std::chrono::system_clock, std::chrono::milliseconds>;

/// "2026-10-16T09:30:00.125Z"
std::string format_timestamp(Timestamp t);

/// Inverse of format_timestamp. Throws Error(BadRequest) on anything else.
Timestamp parse_timestamp(std::string_view text);

Timestamp now_utc();

}  // namespace deme
