#include "gtda/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "gtda/errors.hpp"

namespace gtda {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits into lines, dropping the trailing empty fragment after a final
// newline. Interior empty lines are kept so they can be reported as errors.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

double parse_double(std::string_view token, const std::string& path, long line) {
  token = trim(token);
  if (token.empty()) throw ParseError("empty cell", path, line);
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("not a number: '" + std::string(token) + "'", path, line);
  }
  if (!std::isfinite(value)) {
    throw ParseError("non-finite value: '" + std::string(token) + "'", path, line);
  }
  return value;
}

}  // namespace

Matrix load_features(const std::string& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty feature file: " + path);

  std::vector<std::vector<double>> rows;
  rows.reserve(lines.size());
  Eigen::Index cols = -1;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const long line_no = static_cast<long>(li + 1);
    std::string_view line = lines[li];
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      std::string_view cell = comma == std::string_view::npos
                                  ? line.substr(start)
                                  : line.substr(start, comma - start);
      row.push_back(parse_double(cell, path, line_no));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError("expected " + std::to_string(cols) + " columns, got " +
                           std::to_string(row.size()),
                       path, line_no);
    }
    rows.push_back(std::move(row));
  }

  Matrix m(static_cast<Eigen::Index>(rows.size()), cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

LabelVector load_labels(const std::string& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty label file: " + path);

  LabelVector labels;
  labels.reserve(lines.size());
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const long line_no = static_cast<long>(li + 1);
    std::string_view token = trim(lines[li]);
    if (token.empty()) throw ParseError("empty label line", path, line_no);
    long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw ParseError("not an integer label: '" + std::string(token) + "'", path, line_no);
    }
    if (value < 1) {
      throw ParseError("labels must be positive integers, got " + std::to_string(value),
                       path, line_no);
    }
    labels.push_back(static_cast<int>(value));
  }

  const int m = num_classes(labels);
  std::vector<bool> seen(static_cast<std::size_t>(m) + 1, false);
  for (int y : labels) seen[static_cast<std::size_t>(y)] = true;
  for (int c = 1; c <= m; ++c) {
    if (!seen[static_cast<std::size_t>(c)]) {
      warn(path + ": class " + std::to_string(c) + " has no observations (max label is " +
           std::to_string(m) + ")");
    }
  }
  return labels;
}

int num_classes(const LabelVector& y) {
  int m = 0;
  for (int v : y) m = std::max(m, v);
  return m;
}

void save_matrix_csv(const Matrix& m, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw DataError("cannot write file: " + path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::fprintf(f, j + 1 < m.cols() ? "%.17g," : "%.17g\n", m(i, j));
    }
  }
  std::fclose(f);
}

void save_labels(const LabelVector& y, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw DataError("cannot write file: " + path);
  for (int v : y) std::fprintf(f, "%d\n", v);
  std::fclose(f);
}

}  // namespace gtda
