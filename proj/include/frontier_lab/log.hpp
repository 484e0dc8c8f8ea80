#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

// Minimal stderr logger gated by the FRONTIER_LAB_LOG environment variable:
// error | warn (default) | info | debug.

namespace frontier_lab::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

inline Level threshold() {
    static const Level level = [] {
        const char* env = std::getenv("FRONTIER_LAB_LOG");
        if (env == nullptr) return Level::Warn;
        if (std::strcmp(env, "error") == 0) return Level::Error;
        if (std::strcmp(env, "warn") == 0) return Level::Warn;
        if (std::strcmp(env, "info") == 0) return Level::Info;
        if (std::strcmp(env, "debug") == 0) return Level::Debug;
        return Level::Warn;
    }();
    return level;
}

template <typename... Args>
void emit(Level level, const char* tag, const char* fmt, Args... args) {
    if (level > threshold()) return;
    std::fprintf(stderr, "[%s] ", tag);
    std::fprintf(stderr, fmt, args...);
    std::fprintf(stderr, "\n");
}

template <typename... Args>
void error(const char* fmt, Args... args) {
    emit(Level::Error, "error", fmt, args...);
}
template <typename... Args>
void warn(const char* fmt, Args... args) {
    emit(Level::Warn, "warn", fmt, args...);
}
template <typename... Args>
void info(const char* fmt, Args... args) {
    emit(Level::Info, "info", fmt, args...);
}
template <typename... Args>
void debug(const char* fmt, Args... args) {
    emit(Level::Debug, "debug", fmt, args...);
}

}  // namespace frontier_lab::log
