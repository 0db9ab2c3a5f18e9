#include "nsdpp/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace nsdpp {

namespace {

// Next line that is neither blank nor a '#' comment.
bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

Matrix parse_mtxt(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) fail(Errc::domain, "mtxt: missing dimension line");
  long n = 0;
  {
    std::istringstream ls(line);
    if (!(ls >> n) || n < 1) fail(Errc::domain, "mtxt: invalid dimension");
  }
  Matrix m(n, n);
  long row = 0;
  long col = 0;
  while (row < n) {
    if (!next_content_line(in, line)) fail(Errc::domain, "mtxt: unexpected end of matrix data");
    std::istringstream ls(line);
    Real v;
    while (ls >> v) {
      if (row >= n) fail(Errc::domain, "mtxt: too many entries");
      m(row, col) = v;
      if (++col == n) {
        col = 0;
        ++row;
      }
    }
    if (!ls.eof()) fail(Errc::domain, "mtxt: malformed number");
  }
  if (!m.allFinite()) fail(Errc::domain, "mtxt: non-finite entry");
  return m;
}

Matrix read_mtxt(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::domain, "cannot open " + path);
  return parse_mtxt(in);
}

std::string format_real(Real x) {
  char buf[40];
  // Shortest representation that round-trips; 17 significant digits is
  // always enough for IEEE doubles.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    Real back = std::strtod(buf, nullptr);
    if (back == x) return buf;
  }
  return buf;
}

void write_mtxt(std::ostream& out, const Matrix& m) {
  if (m.rows() != m.cols()) fail(Errc::dim_mismatch, "mtxt stores square matrices");
  out << m.rows() << "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_real(m(i, j));
    }
    out << "\n";
  }
}

void write_mtxt(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) fail(Errc::domain, "cannot open " + path + " for writing");
  write_mtxt(out, m);
  if (!out) fail(Errc::numeric_failure, "write failed: " + path);
}

void write_oracle_csv(const std::string& path, const ProbabilityTable& table) {
  std::ofstream out(path);
  if (!out) fail(Errc::domain, "cannot open " + path + " for writing");
  out << "# bitmask,probability  (bit i set <=> element i in subset, indices 0-based)\n";
  for (std::size_t mask = 0; mask < table.probs.size(); ++mask)
    out << mask << ',' << format_real(table.probs[mask]) << "\n";
}

}  // namespace nsdpp
