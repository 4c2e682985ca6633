#include "cvop/log.hpp"

#include <cstdlib>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace cvop::log {

namespace {

Level g_level = Level::Quiet;

std::shared_ptr<spdlog::logger> logger() {
    static auto lg = [] {
        auto l = spdlog::stderr_color_mt("cvop");
        l->set_pattern("[%l] %v");
        l->set_level(spdlog::level::off);
        return l;
    }();
    return lg;
}

}  // namespace

void set_level(Level level) {
    g_level = level;
    switch (level) {
        case Level::Quiet: logger()->set_level(spdlog::level::warn); break;
        case Level::Info: logger()->set_level(spdlog::level::info); break;
        case Level::Trace: logger()->set_level(spdlog::level::trace); break;
    }
}

Level level() { return g_level; }

void init_from_env() {
    const char* v = std::getenv("CVOP_LOG");
    const std::string s = v ? v : "quiet";
    if (s == "trace")
        set_level(Level::Trace);
    else if (s == "info")
        set_level(Level::Info);
    else
        set_level(Level::Quiet);
}

void info(const std::string& msg) { logger()->info(msg); }
void trace(const std::string& msg) { logger()->trace(msg); }
void warn(const std::string& msg) { logger()->warn(msg); }

}  // namespace cvop::log
