#pragma once

#include <string>

namespace cvop::log {

enum class Level { Quiet, Info, Trace };

/// Reads CVOP_LOG (quiet | info | trace); defaults to quiet.
void init_from_env();
void set_level(Level level);
Level level();

void info(const std::string& msg);
void trace(const std::string& msg);
void warn(const std::string& msg);

}  // namespace cvop::log
