#pragma once

#include <iosfwd>
#include <string>

#include "nsdpp/kernel.hpp"

namespace nsdpp {

// MTXT matrix text format: optional '#' comment lines, then a line with n,
// then n whitespace-separated rows of n decimal reals.

Matrix parse_mtxt(std::istream& in);
Matrix read_mtxt(const std::string& path);
void write_mtxt(std::ostream& out, const Matrix& m);
void write_mtxt(const std::string& path, const Matrix& m);

/// Shortest-faithful decimal rendering (round-trips a double exactly).
std::string format_real(Real x);

void write_oracle_csv(const std::string& path, const ProbabilityTable& table);

}  // namespace nsdpp
