#include "nearkit/io.hpp"

#include "nearkit/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace nearkit {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_token(std::string_view tok, std::size_t line, std::string_view source) {
  tok = trim(tok);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(std::string(source) + ": not a number: '" + std::string(tok) + "'", line);
  if (!std::isfinite(v)) throw ParseError(std::string(source) + ": non-finite entry", line);
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

Matrix parse_matrix(std::istream& in, std::string_view source) {
  std::vector<std::vector<double>> rows;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const std::string_view row = trim(text);
    if (row.empty()) continue;
    std::vector<double> values;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = row.find(',', start);
      values.push_back(parse_token(row.substr(start, comma - start), line, source));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && values.size() != rows.front().size())
      throw ParseError(std::string(source) + ": row has " + std::to_string(values.size()) + " entries, expected " +
                           std::to_string(rows.front().size()),
                       line);
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError(std::string(source) + ": empty matrix file", line);

  Matrix M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j) M(i, j) = rows[i][j];
  return M;
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_matrix(in, path.string());
}

void write_matrix(std::ostream& out, const Matrix& M) {
  std::string line;
  for (Index i = 0; i < M.rows(); ++i) {
    line.clear();
    for (Index j = 0; j < M.cols(); ++j) {
      if (j) line += ',';
      line += format_double(M(i, j));
    }
    line += '\n';
    out << line;
  }
}

void write_matrix(const std::filesystem::path& path, const Matrix& M) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_matrix(out, M);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace nearkit
