#include "lexforge/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <string_view>

namespace lexforge {

namespace {

spdlog::level::level_enum level_from_env() {
    const char* raw = std::getenv("LEXFORGE_LOG");
    std::string_view v = raw ? raw : "warn";
    if (v == "error") return spdlog::level::err;
    if (v == "info") return spdlog::level::info;
    if (v == "debug") return spdlog::level::debug;
    return spdlog::level::warn;
}

std::shared_ptr<spdlog::logger> make_logger() {
    auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
    auto logger = std::make_shared<spdlog::logger>("lexforge", sink);
    logger->set_pattern("[%l] %v");
    logger->set_level(level_from_env());
    return logger;
}

} // namespace

spdlog::logger& log() {
    static std::shared_ptr<spdlog::logger> instance = make_logger();
    return *instance;
}

} // namespace lexforge
