#pragma once

#include <spdlog/spdlog.h>

namespace rpls {

/// Library logger, writing to stderr. The level comes from the RPLS_LOG
/// environment variable (off | info | trace) on first use and defaults to off.
spdlog::logger &logger();

} // namespace rpls
