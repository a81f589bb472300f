#pragma once

#include "rpls/linalg_ops.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rpls {

struct DatasetFile {
  std::filesystem::path path;
  bool has_header = false;
  char delimiter = ',';
};

/// Every data row must have the same number of finite decimal cells. Blank
/// lines are skipped; a header, if declared, is the first non-blank line.
DenseMatrix load_csv(const DatasetFile &file);
DenseMatrix parse_csv(std::string_view text, bool has_header = false,
                      char delimiter = ',');

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

std::string to_csv(const DenseMatrix &m,
                   const std::vector<std::string> &header = {},
                   char delimiter = ',');
void write_csv(const std::filesystem::path &path, const DenseMatrix &m,
               const std::vector<std::string> &header = {},
               char delimiter = ',');

/// Writes `text` to `path`, throwing rpls::Error on failure.
void write_text(const std::filesystem::path &path, std::string_view text);
std::string read_text(const std::filesystem::path &path);

} // namespace rpls
