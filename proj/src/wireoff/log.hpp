#pragma once

#include <spdlog/spdlog.h>

#include <memory>
#include <string_view>
#include <utility>

namespace wireoff::log {

/// Shared stderr logger. The level comes from WIREOFF_LOG
/// (error, warn, info, debug); the default is warn.
spdlog::logger& get();

/// Overrides the level; unknown names are ignored and return false.
bool set_level(std::string_view name);

template <typename... Args>
void debug(fmt::format_string<Args...> f, Args&&... args) {
    get().debug(f, std::forward<Args>(args)...);
}

template <typename... Args>
void info(fmt::format_string<Args...> f, Args&&... args) {
    get().info(f, std::forward<Args>(args)...);
}

template <typename... Args>
void warn(fmt::format_string<Args...> f, Args&&... args) {
    get().warn(f, std::forward<Args>(args)...);
}

template <typename... Args>
void error(fmt::format_string<Args...> f, Args&&... args) {
    get().error(f, std::forward<Args>(args)...);
}

}  // namespace wireoff::log
