#pragma once

// Minimal leveled logging to stderr. The threshold comes from the
// MOBIUS_GEOFENCE_LOG environment variable (error, warn, info, debug) and
// defaults to warn.

#include <string_view>

namespace mgf::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Parses a level name; returns false for unknown names.
bool parse_level(std::string_view name, Level& out);

/// Reads MOBIUS_GEOFENCE_LOG. An unknown value falls back to warn with a notice.
void init_from_env();

void set_level(Level level);
Level level();

void write(Level level, std::string_view message);

inline void error(std::string_view m) { write(Level::Error, m); }
inline void warn(std::string_view m) { write(Level::Warn, m); }
inline void info(std::string_view m) { write(Level::Info, m); }
inline void debug(std::string_view m) { write(Level::Debug, m); }

}  // namespace mgf::log
