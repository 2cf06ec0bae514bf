#pragma once

#include <functional>
#include <string_view>

namespace contagion {

enum class LogLevel { Debug = 0, Info = 1, Warning = 2, Error = 3, Off = 4 };

using LogSink = std::function<void(LogLevel, std::string_view)>;

// Messages below the threshold are dropped. Default threshold is Warning,
// default sink writes to stderr.
void set_log_level(LogLevel level);
LogLevel log_level();
void set_log_sink(LogSink sink);
void log(LogLevel level, std::string_view message);

} // namespace contagion
