#pragma once

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string_view>

namespace levycross::log {

enum class Level { Off = 0, Warn = 1, Info = 2, Debug = 3 };

inline Level level() {
    static Level lv = [] {
        const char* env = std::getenv("PRICER_LOG");
        if (!env) return Level::Warn;
        if (!std::strcmp(env, "off")) return Level::Off;
        if (!std::strcmp(env, "warn")) return Level::Warn;
        if (!std::strcmp(env, "info")) return Level::Info;
        if (!std::strcmp(env, "debug")) return Level::Debug;
        return Level::Warn;
    }();
    return lv;
}

inline void warn(std::string_view msg) {
    if (level() >= Level::Warn) std::cerr << "[warn] " << msg << "\n";
}

inline void info(std::string_view msg) {
    if (level() >= Level::Info) std::cerr << "[info] " << msg << "\n";
}

inline void debug(std::string_view msg) {
    if (level() >= Level::Debug) std::cerr << "[debug] " << msg << "\n";
}

} // namespace levycross::log
