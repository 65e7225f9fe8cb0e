#include "pidmd/matrix_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace pidmd {

namespace {

// Parses a double allowing an optional leading sign. Returns chars consumed,
// or 0 on failure.
std::size_t parse_double(const std::string& s, std::size_t pos, double* out) {
  if (pos >= s.size()) return 0;
  std::size_t start = pos;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') {
    negative = (s[pos] == '-');
    ++pos;
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), value);
  if (ec != std::errc() || ptr == s.data() + pos) return 0;
  *out = negative ? -value : value;
  return static_cast<std::size_t>(ptr - s.data()) - start;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

void format_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

cd parse_complex(const std::string& raw, std::size_t line, std::size_t column) {
  const std::string token = trim(raw);
  if (token.empty()) throw ParseError(line, column, "empty token");

  const bool imaginary_tail = token.back() == 'i' || token.back() == 'I';
  if (!imaginary_tail) {
    double re = 0.0;
    std::size_t used = parse_double(token, 0, &re);
    if (used != token.size()) throw ParseError(line, column, "bad number '" + token + "'");
    if (!std::isfinite(re)) throw ParseError(line, column, "non-finite entry '" + token + "'");
    return cd(re, 0.0);
  }

  const std::string body = token.substr(0, token.size() - 1);
  // "i", "+i", "-i" are unit imaginaries.
  if (body.empty()) return cd(0.0, 1.0);
  if (body == "+") return cd(0.0, 1.0);
  if (body == "-") return cd(0.0, -1.0);

  // Try pure imaginary first: the whole body is one number.
  double im = 0.0;
  std::size_t used = parse_double(body, 0, &im);
  if (used == body.size()) {
    if (!std::isfinite(im)) throw ParseError(line, column, "non-finite entry '" + token + "'");
    return cd(0.0, im);
  }

  // Otherwise "a+bi" / "a-bi": a number, then a signed imaginary part.
  double re = 0.0;
  used = parse_double(body, 0, &re);
  if (used == 0 || used >= body.size())
    throw ParseError(line, column, "bad complex token '" + token + "'");
  const char sep = body[used];
  if (sep != '+' && sep != '-') throw ParseError(line, column, "bad complex token '" + token + "'");
  const std::string imag_str = body.substr(used);
  if (imag_str == "+") {
    im = 1.0;
  } else if (imag_str == "-") {
    im = -1.0;
  } else {
    std::size_t imag_used = parse_double(imag_str, 0, &im);
    if (imag_used != imag_str.size())
      throw ParseError(line, column, "bad complex token '" + token + "'");
  }
  if (!std::isfinite(re) || !std::isfinite(im))
    throw ParseError(line, column, "non-finite entry '" + token + "'");
  return cd(re, im);
}

std::string format_complex(cd z) {
  std::string out;
  const double re = z.real();
  const double im = z.imag();
  const bool has_imag = im != 0.0 || std::signbit(im);
  const bool has_real = re != 0.0 || std::signbit(re) || !has_imag;
  if (has_real) format_double(out, re);
  if (has_imag) {
    if (has_real && !std::signbit(im)) out += '+';
    format_double(out, im);
    out += 'i';
  }
  return out;
}

Matrix load_matrix(std::istream& in) {
  std::vector<std::vector<cd>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<cd> row;
    std::stringstream ss(line);
    std::string tok;
    std::size_t col = 0;
    while (std::getline(ss, tok, ',')) {
      ++col;
      row.push_back(parse_complex(tok, lineno, col));
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(lineno, row.size(),
                       "row has " + std::to_string(row.size()) + " entries, expected " +
                           std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw EmptyInput("no matrix rows found");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

Matrix load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "' for reading");
  return load_matrix(in);
}

void save_matrix(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::string line;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) line += ',';
      line += format_complex(m(i, j));
    }
    line += '\n';
    out << line;
  }
}

void save_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  save_matrix(out, m);
}

}  // namespace pidmd
