#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace polyrag {

using Clock = std::chrono::system_clock;
using Instant = std::chrono::time_point<Clock, std::chrono::seconds>;
using ClockFn = std::function<Instant()>;

Instant now_utc();

// RFC 3339 / ISO 8601 UTC, second precision: "2024-01-01T00:00:00Z".
std::string format_rfc3339(Instant t);

// Accepts "YYYY-MM-DDTHH:MM:SS[.fff](Z|+HH:MM|-HH:MM)".
std::optional<Instant> parse_rfc3339(std::string_view s);

} // namespace polyrag
