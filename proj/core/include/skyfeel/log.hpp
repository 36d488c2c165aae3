#pragma once

#include <string>

namespace skyfeel {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

/// Threshold from the SKYFEEL_LOG environment variable
/// (error | warn | info | debug); defaults to warn.
LogLevel log_threshold();

/// Writes "[skyfeel level] message" to stderr when `level` passes the
/// threshold.
void log_message(LogLevel level, const std::string& message);

inline void log_error(const std::string& m) { log_message(LogLevel::kError, m); }
inline void log_warn(const std::string& m) { log_message(LogLevel::kWarn, m); }
inline void log_info(const std::string& m) { log_message(LogLevel::kInfo, m); }
inline void log_debug(const std::string& m) { log_message(LogLevel::kDebug, m); }

}  // namespace skyfeel
