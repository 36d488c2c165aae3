#include "skyfeel/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <mutex>

namespace skyfeel {

LogLevel log_threshold() {
    static const LogLevel threshold = [] {
        const char* env = std::getenv("SKYFEEL_LOG");
        if (!env) return LogLevel::kWarn;
        const std::string v(env);
        if (v == "error") return LogLevel::kError;
        if (v == "warn") return LogLevel::kWarn;
        if (v == "info") return LogLevel::kInfo;
        if (v == "debug") return LogLevel::kDebug;
        return LogLevel::kWarn;
    }();
    return threshold;
}

void log_message(LogLevel level, const std::string& message) {
    if (static_cast<int>(level) > static_cast<int>(log_threshold())) return;
    static std::mutex mtx;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::lock_guard<std::mutex> lock(mtx);
    std::fprintf(stderr, "[skyfeel %s] %s\n", names[static_cast<int>(level)],
                 message.c_str());
}

}  // namespace skyfeel
