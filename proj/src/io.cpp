#include "rpls/io.hpp"

#include "rpls/errors.hpp"

#include <fmt/format.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rpls {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line, char delim) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    cells.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return cells;
}

double parse_cell(std::string_view cell, std::size_t line, std::size_t col) {
  if (!cell.empty() && cell.front() == '+')
    cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() ||
      !std::isfinite(v))
    throw ParseError(fmt::format("line {}, column {}: '{}' is not a finite number",
                                 line, col, cell),
                     line, col);
  return v;
}

} // namespace

DenseMatrix parse_csv(std::string_view text, bool has_header, char delimiter) {
  std::vector<double> values;
  std::size_t cols = 0, rows = 0, line_no = 0;
  bool header_pending = has_header;

  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const std::string_view raw =
        text.substr(start, end == std::string_view::npos ? end : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (trim(raw).empty())
      continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto cells = split_cells(raw, delimiter);
    if (rows == 0)
      cols = cells.size();
    else if (cells.size() != cols)
      throw ParseError(fmt::format("line {}: expected {} cells, found {}",
                                   line_no, cols, cells.size()),
                       line_no);
    for (std::size_t c = 0; c < cells.size(); ++c)
      values.push_back(parse_cell(cells[c], line_no, c + 1));
    ++rows;
  }
  if (rows == 0)
    throw ParseError("csv has no data rows");

  DenseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          values[i * cols + j];
  return m;
}

DenseMatrix load_csv(const DatasetFile &file) {
  try {
    return parse_csv(read_text(file.path), file.has_header, file.delimiter);
  } catch (const ParseError &e) {
    throw ParseError(fmt::format("{}: {}", file.path.string(), e.what()),
                     e.line(), e.column());
  }
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string to_csv(const DenseMatrix &m, const std::vector<std::string> &header,
                   char delimiter) {
  std::string out;
  if (!header.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j)
        out += delimiter;
      out += header[j];
    }
    out += '\n';
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j)
        out += delimiter;
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::filesystem::path &path, const DenseMatrix &m,
               const std::vector<std::string> &header, char delimiter) {
  write_text(path, to_csv(m, header, delimiter));
}

void write_text(const std::filesystem::path &path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(fmt::format("cannot open {} for writing", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out)
    throw Error(fmt::format("write to {} failed", path.string()));
}

std::string read_text(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace rpls
