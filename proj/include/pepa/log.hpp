#pragma once

#include <sstream>
#include <string>

namespace pepa::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

// Reads PEPA_LOG once (error|warn|info|debug); defaults to warn.
Level threshold();
void set_threshold(Level level);
void write(Level level, const std::string& message);

template <typename... Args>
void emit(Level level, const Args&... args) {
    if (static_cast<int>(level) > static_cast<int>(threshold()))
        return;
    std::ostringstream out;
    (out << ... << args);
    write(level, out.str());
}

template <typename... Args> void warn(const Args&... args) { emit(Level::warn, args...); }
template <typename... Args> void info(const Args&... args) { emit(Level::info, args...); }
template <typename... Args> void debug(const Args&... args) { emit(Level::debug, args...); }

} // namespace pepa::log
