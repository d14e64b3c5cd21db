#include "pepa/log.hpp"
#include "pepa/error.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string_view>

namespace pepa {

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::usage: return 1;
    case ErrorKind::parse: return 2;
    case ErrorKind::model: return 2;
    case ErrorKind::condition: return 3;
    case ErrorKind::state_cap: return 4;
    case ErrorKind::solver: return 5;
    case ErrorKind::verification: return 6;
    case ErrorKind::tolerance: return 7;
    case ErrorKind::io: return 8;
    }
    return 1;
}

} // namespace pepa

namespace pepa::log {

namespace {

Level from_env() {
    const char* raw = std::getenv("PEPA_LOG");
    if (raw == nullptr)
        return Level::warn;
    std::string_view v(raw);
    if (v == "error") return Level::error;
    if (v == "info") return Level::info;
    if (v == "debug") return Level::debug;
    return Level::warn;
}

std::atomic<int>& current() {
    static std::atomic<int> level{static_cast<int>(from_env())};
    return level;
}

std::mutex sink_mutex;

} // namespace

Level threshold() { return static_cast<Level>(current().load()); }

void set_threshold(Level level) { current().store(static_cast<int>(level)); }

void write(Level level, const std::string& message) {
    static constexpr const char* names[] = {"error", "warn", "info", "debug"};
    std::lock_guard lock(sink_mutex);
    std::cerr << "[" << names[static_cast<int>(level)] << "] " << message << '\n';
}

} // namespace pepa::log
