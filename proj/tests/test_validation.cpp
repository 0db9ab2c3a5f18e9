#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nsdpp/oracle.hpp"
#include "nsdpp/transforms.hpp"
#include "nsdpp/validation.hpp"
#include "test_support.hpp"

using namespace nsdpp;
using namespace nsdpp::testing;

TEST_CASE("exhaustive minor certification") {
  CHECK(is_p0_exhaustive(lensemble(Matrix::Identity(3, 3))).verdict == Verdict::Valid);

  // rotation generator: minors 0, 0, 1
  CHECK(is_p0_exhaustive(lensemble(matrix2(0.0, 1.0, -1.0, 0.0))).verdict == Verdict::Valid);

  const ValidationReport bad = is_p0_exhaustive(lensemble(matrix2(0.0, 2.0, 2.0, 0.0)));
  CHECK(bad.verdict == Verdict::Invalid);
  REQUIRE(bad.witness_subset.has_value());
  CHECK(bad.witness_subset->bits() == 0b11);
  CHECK(principal_minor(lensemble(matrix2(0.0, 2.0, 2.0, 0.0)), *bad.witness_subset) <
        -bad.tolerance);

  CHECK_THROWS_AS(is_p0_exhaustive(lensemble(Matrix::Zero(20, 20))), Error);
}

TEST_CASE("binary switching certification") {
  CHECK(is_dpp_cara1(correlation(matrix2(0.5, 0.5, -0.5, 0.5))).verdict == Verdict::Valid);
  CHECK(is_dpp_cara1(correlation(Matrix(Eigen::Vector2d(0.2, 0.9).asDiagonal()))).verdict ==
        Verdict::Valid);

  const ValidationReport bad = is_dpp_cara1(correlation(matrix2(0.5, 1.0, 1.0, 0.5)));
  CHECK(bad.verdict == Verdict::Invalid);
  REQUIRE(bad.witness_subset.has_value());
  // p = 0 everywhere probes P(X = full set) = det K = -0.75
  CHECK(bad.witness_subset->empty());
  CHECK(bad.min_value == doctest::Approx(-0.75));
}

TEST_CASE("randomized interior test") {
  CHECK(is_dpp_cara2_randomized(correlation(0.5 * Matrix::Identity(3, 3)), 200, 1).verdict ==
        Verdict::Unknown);
  CHECK(is_dpp_cara2_randomized(correlation(Matrix::Zero(2, 2)), 200, 1).verdict ==
        Verdict::Unknown);

  const ValidationReport found =
      is_dpp_cara2_randomized(correlation(matrix2(0.5, 1.0, 1.0, 0.5)), 1000, 7);
  CHECK(found.verdict == Verdict::Invalid);
  REQUIRE(found.witness_vector.has_value());
  // witness re-check: the reported interior p has a nonpositive determinant
  CHECK(determinant(blend_rows(matrix2(0.5, 1.0, 1.0, 0.5), *found.witness_vector)) <= 0.0);
}

TEST_CASE("coordinatewise violation certificates") {
  const Kernel half = correlation(0.5 * Matrix::Identity(2, 2));
  Vector x(2);
  x << 1.0, -1.0;
  CHECK_FALSE(cara3_violation_check(half, x));

  CHECK(cara3_violation_check(correlation(matrix2(0.5, 1.0, 1.0, 0.5)), x));

  const Kernel diag = correlation(Matrix(Eigen::Vector2d(0.2, 0.9).asDiagonal()));
  Vector ones = Vector::Ones(2);
  CHECK_FALSE(cara3_violation_check(diag, ones));

  CHECK_THROWS_AS(cara3_violation_check(half, Vector::Zero(2)), Error);
}

TEST_CASE("violation certificates imply exhaustive invalidity") {
  RngStream rng(73, 0);
  int found = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Kernel k = correlation(random_matrix(rng, 5, -0.5, 1.5));
    for (int probe = 0; probe < 40; ++probe) {
      const Vector x = random_vector(rng, 5, -1.0, 1.0);
      if (x.isZero(0.0)) continue;
      if (cara3_violation_check(k, x)) {
        CHECK(is_dpp_cara1(k).verdict == Verdict::Invalid);
        ++found;
        break;
      }
    }
  }
  CHECK(found > 20);  // the probe actually fires on this matrix family
}

TEST_CASE("exhaustive agreement between the K side and the L side") {
  RngStream rng(79, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const Matrix m = random_matrix(rng, 5, -0.5, 1.5);
    const Matrix gap = Matrix::Identity(5, 5) - m;
    const Real det = std::abs(determinant(gap));
    if (det < 1e-3 || spectral_norm(gap.inverse()) > 1e3) continue;  // well-conditioned only
    const Kernel k = correlation(m);
    const Verdict kv = is_dpp_cara1(k).verdict;
    const Verdict lv = is_p0_exhaustive(k_to_l(k)).verdict;
    CHECK(kv == lv);
  }
}

TEST_CASE("sufficient conditions certify the documented families") {
  // symmetric spectrum, exact both directions
  RngStream rng(83, 0);
  const Kernel sym = random_symmetric_valid(rng, 4);
  const ValidationReport symr = sufficient_conditions(sym);
  CHECK(symr.verdict == Verdict::Valid);
  CHECK(symr.method == Method::SymmetricSpectrum);

  Matrix over = Matrix::Identity(3, 3);
  over(0, 0) = 1.2;
  const ValidationReport overr = sufficient_conditions(correlation(over));
  CHECK(overr.verdict == Verdict::Invalid);
  CHECK(overr.method == Method::SymmetricSpectrum);

  // half of identity-minus-orthogonal
  const Matrix rot = matrix2(0.0, 1.0, -1.0, 0.0);
  const ValidationReport halfr =
      sufficient_conditions(correlation(0.5 * (Matrix::Identity(2, 2) - rot)));
  CHECK(halfr.verdict == Verdict::Valid);
  CHECK(halfr.method == Method::HalfIdentityNorm);

  // dominant rows reached when the norm certificate does not apply
  Matrix dom = Matrix::Zero(3, 3);
  dom.diagonal().setConstant(0.5);
  dom(1, 0) = 0.45;
  dom(2, 0) = 0.45;
  const ValidationReport domr = sufficient_conditions(correlation(dom));
  CHECK(domr.verdict == Verdict::Valid);
  CHECK(domr.method == Method::DiagonalDominance);

  // this kernel is row dominant, but the norm certificate fires first
  const Kernel both = correlation(matrix2(0.4, 0.1, -0.2, 0.7));
  const ValidationReport bothr = sufficient_conditions(both);
  CHECK(bothr.verdict == Verdict::Valid);
  CHECK(bothr.method == Method::HalfIdentityNorm);
  CHECK(is_dpp_cara1(both).verdict == Verdict::Valid);

  // block triangular structure with valid and invalid diagonal blocks
  Matrix tri = matrix2(0.5, 7.0, 0.0, 0.5);
  const ValidationReport trir = sufficient_conditions(correlation(tri));
  CHECK(trir.verdict == Verdict::Valid);
  CHECK(trir.method == Method::BlockTriangular);

  Matrix tribad = matrix2(1.2, 7.0, 0.0, 0.5);
  const ValidationReport tribadr = sufficient_conditions(correlation(tribad));
  CHECK(tribadr.verdict == Verdict::Invalid);
  CHECK(tribadr.method == Method::BlockTriangular);

  // nothing applies: nonsymmetric, big norm, no dominance, one strongly
  // connected component
  const ValidationReport none = sufficient_conditions(correlation(matrix2(0.5, 1.0, 0.9, 0.5)));
  CHECK(none.verdict == Verdict::Unknown);
  CHECK(none.method == Method::None);
}

TEST_CASE("sufficient-condition verdicts are sound") {
  RngStream rng(89, 0);
  int valid_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);
    const Kernel k = random_valid_kernel(rng, n);
    const ValidationReport r = sufficient_conditions(k);
    if (r.verdict == Verdict::Valid) {
      CHECK(is_dpp_cara1(k).verdict == Verdict::Valid);
      ++valid_seen;
    }
  }
  CHECK(valid_seen > 100);
}

TEST_CASE("shrinking toward the center preserves validity") {
  const Kernel k = correlation(matrix2(0.5, 0.5, -0.5, 0.5));
  CHECK((shrink_to_center(k, 1.0).entries() - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK((shrink_to_center(k, 0.0).entries() - k.entries()).cwiseAbs().maxCoeff() == 0.0);
  const Matrix mid = shrink_to_center(k, 0.5).entries();
  CHECK((mid - matrix2(0.5, 0.25, -0.25, 0.5)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(is_dpp_cara1(correlation(mid)).verdict == Verdict::Valid);
  CHECK_THROWS_AS(shrink_to_center(k, -0.1), Error);

  RngStream rng(97, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 7);
    const Kernel base = random_valid_kernel(rng, n);
    for (int step = 1; step <= 9; ++step)
      CHECK(is_dpp_cara1(shrink_to_center(base, 0.1 * step)).verdict == Verdict::Valid);
  }
}

TEST_CASE("validity is closed under particle-hole") {
  RngStream rng(101, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 7);
    const Kernel k = random_valid_kernel(rng, n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
      const Kernel moved = particle_hole(k, SubsetMask::from_bits(n, mask));
      CHECK(is_dpp_cara1(moved).verdict == Verdict::Valid);
    }
  }
}

TEST_CASE("spectral norm") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 2.0;
  d(1, 1) = -0.5;
  CHECK(spectral_norm(d) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(spectral_norm(Matrix::Zero(4, 4)) == 0.0);
  // clustered top singular values exercise the SVD fallback
  CHECK(spectral_norm(Matrix::Identity(6, 6)) == doctest::Approx(1.0).epsilon(1e-10));
  RngStream rng(103, 0);
  const Matrix q = random_orthogonal(rng, 5);
  CHECK(spectral_norm(q) == doctest::Approx(1.0).epsilon(1e-10));
}
