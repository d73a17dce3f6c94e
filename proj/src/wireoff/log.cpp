#include "wireoff/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>

#include <cstdlib>
#include <optional>
#include <string>

namespace wireoff::log {

namespace {

std::optional<spdlog::level::level_enum> parse_level(std::string_view name) {
    if (name == "error") return spdlog::level::err;
    if (name == "warn") return spdlog::level::warn;
    if (name == "info") return spdlog::level::info;
    if (name == "debug") return spdlog::level::debug;
    return std::nullopt;
}

}  // namespace

spdlog::logger& get() {
    static std::shared_ptr<spdlog::logger> logger = [] {
        auto l = std::make_shared<spdlog::logger>("wireoff", std::make_shared<spdlog::sinks::stderr_sink_mt>());
        l->set_pattern("[%l] %v");
        l->set_level(spdlog::level::warn);
        if (const char* env = std::getenv("WIREOFF_LOG")) {
            if (auto lvl = parse_level(env)) l->set_level(*lvl);
        }
        return l;
    }();
    return *logger;
}

bool set_level(std::string_view name) {
    const auto lvl = parse_level(name);
    if (!lvl) return false;
    get().set_level(*lvl);
    return true;
}

}  // namespace wireoff::log
