#include "rpls/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>

#include <cstdlib>
#include <string_view>

namespace rpls {

spdlog::logger &logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
    auto log = std::make_shared<spdlog::logger>("rpls", sink);
    log->set_pattern("[%l] %v");
    spdlog::level::level_enum level = spdlog::level::off;
    if (const char *env = std::getenv("RPLS_LOG")) {
      const std::string_view v(env);
      if (v == "info")
        level = spdlog::level::info;
      else if (v == "trace")
        level = spdlog::level::trace;
    }
    log->set_level(level);
    return log;
  }();
  return *instance;
}

} // namespace rpls
