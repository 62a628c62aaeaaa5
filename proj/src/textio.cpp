#include "dre/textio.hpp"

#include <array>
#include <cmath>
#include <istream>
#include <ostream>

#include "dre/errors.hpp"

namespace dre {

std::string format_double(double v) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::string format_double_short(double v) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{}) throw BadParameters("parse_double: malformed number");
  return v;
}

void write_matrix(std::ostream& os, const Matrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

Matrix read_matrix(std::istream& is) {
  Index rows = 0, cols = 0;
  if (!(is >> rows >> cols) || rows < 0 || cols < 0) {
    throw BadParameters("read_matrix: bad dimension header");
  }
  Matrix m(rows, cols);
  std::string tok;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (!(is >> tok)) throw BadParameters("read_matrix: truncated data");
      m(i, j) = parse_double(tok);
    }
  }
  return m;
}

void write_vector(std::ostream& os, const Vector& v) {
  write_matrix(os, Matrix(v));
}

Vector read_vector(std::istream& is) {
  const Matrix m = read_matrix(is);
  if (m.cols() != 1) throw BadParameters("read_vector: expected a single column");
  return Vector(m.col(0));
}

}  // namespace dre
