#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nsdpp {

using Real = double;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<Real>;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Largest n for which exhaustive 2^n subset scans are attempted by default.
inline constexpr int kDefaultEnumerationCap = 16;

/// Failure codes carried by every Error. The CLI maps these onto exit codes,
/// tests match on them instead of message strings.
enum class Errc {
  domain,                // argument outside its documented range
  dim_mismatch,
  index_out_of_range,
  zero_vector,
  cap_exceeded,          // 2^n enumeration refused
  singular_conversion,   // I-K (or I+L) numerically singular
  singular_pivot,        // principal pivot block not invertible
  convergence_failure,
  probability_range,     // conditional probability outside the clamping band
  pivot_breakdown,       // near-zero pivot with a non-negligible numerator
  numeric_failure,
  normalization_error,   // rank-one spec with <u,v> != 1
  invalid_double,        // 2K failed validation in the split coupling
  bound_violated,        // coupling eigenvalue bound violated
  not_symmetric,
  negative_mass,
  non_probability_output,
  out_of_region,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

/// Nonnegativity tolerance for principal minors and set probabilities of a
/// well-scaled n x n kernel: 1e-9 * max(1, max|entry|) * n.
inline Real minor_tolerance(const Matrix& m) {
  const Real amax = m.size() == 0 ? Real(0) : m.cwiseAbs().maxCoeff();
  return 1e-9 * std::max<Real>(Real(1), amax) * static_cast<Real>(m.rows());
}

}  // namespace nsdpp
