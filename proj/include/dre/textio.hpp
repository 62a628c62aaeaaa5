#pragma once

#include <charconv>
#include <iosfwd>
#include <string>
#include <string_view>

#include "dre/numerics.hpp"

namespace dre {

// 17 significant digits, '.' separator regardless of locale.
std::string format_double(double v);

// Shortest representation that still round-trips; used for labels.
std::string format_double_short(double v);

// Parses what format_double produced (plus "inf"/"-inf"/"nan").
double parse_double(std::string_view s);

// Plain-text matrix block: one dimension header line "rows cols", then one
// line of space-separated decimal floats per row.
void write_matrix(std::ostream& os, const Matrix& m);
Matrix read_matrix(std::istream& is);

void write_vector(std::ostream& os, const Vector& v);
Vector read_vector(std::istream& is);

}  // namespace dre
