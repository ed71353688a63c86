#include "mobius_geofence/logging.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace mgf::log {

namespace {

std::atomic<int> g_level{static_cast<int>(Level::Warn)};
std::mutex g_mutex;

const char* tag(Level l) {
    switch (l) {
        case Level::Error: return "error";
        case Level::Warn: return "warn";
        case Level::Info: return "info";
        case Level::Debug: return "debug";
    }
    return "?";
}

}  // namespace

bool parse_level(std::string_view name, Level& out) {
    if (name == "error") out = Level::Error;
    else if (name == "warn") out = Level::Warn;
    else if (name == "info") out = Level::Info;
    else if (name == "debug") out = Level::Debug;
    else return false;
    return true;
}

void init_from_env() {
    const char* env = std::getenv("MOBIUS_GEOFENCE_LOG");
    if (!env || !*env) return;
    Level l;
    if (parse_level(env, l)) {
        set_level(l);
    } else {
        set_level(Level::Warn);
        write(Level::Warn, std::string("unknown MOBIUS_GEOFENCE_LOG value '") + env + "', using warn");
    }
}

void set_level(Level l) { g_level.store(static_cast<int>(l)); }

Level level() { return static_cast<Level>(g_level.load()); }

void write(Level l, std::string_view message) {
    if (static_cast<int>(l) > g_level.load()) return;
    std::lock_guard<std::mutex> lock(g_mutex);
    std::cerr << "[" << tag(l) << "] " << message << '\n';
}

}  // namespace mgf::log
