#pragma once

#include <filesystem>

#ifndef RPLS_TEST_FIXTURES
#error "RPLS_TEST_FIXTURES must point at tests/fixtures"
#endif

namespace rpls::testing {
inline std::filesystem::path fixture(const char *name) {
  return std::filesystem::path(RPLS_TEST_FIXTURES) / name;
}
} // namespace rpls::testing
