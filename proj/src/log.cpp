#include "contagion/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace contagion {
namespace {

std::atomic<LogLevel> g_level{LogLevel::Warning};
std::mutex g_mutex;

LogSink& sink() {
    static LogSink s = [](LogLevel level, std::string_view msg) {
        static constexpr const char* names[] = {"debug", "info", "warning", "error"};
        std::cerr << "[contagion:" << names[static_cast<int>(level)] << "] " << msg << '\n';
    };
    return s;
}

} // namespace

void set_log_level(LogLevel level) { g_level = level; }
LogLevel log_level() { return g_level; }

void set_log_sink(LogSink s) {
    std::lock_guard lock(g_mutex);
    sink() = std::move(s);
}

void log(LogLevel level, std::string_view message) {
    if (level < g_level.load() || level == LogLevel::Off) return;
    std::lock_guard lock(g_mutex);
    if (sink()) sink()(level, message);
}

} // namespace contagion
