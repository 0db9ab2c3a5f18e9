#include "nsdpp/validation.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <cstdint>
#include <mutex>

#include "nsdpp/parallel.hpp"
#include "nsdpp/rng.hpp"

namespace nsdpp {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Valid: return "valid";
    case Verdict::Invalid: return "invalid";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

const char* to_string(Method m) {
  switch (m) {
    case Method::ExhaustiveMinors: return "exhaustive-minors";
    case Method::Cara1: return "cara1";
    case Method::Cara2Randomized: return "cara2-randomized";
    case Method::Cara3Witness: return "cara3-witness";
    case Method::SymmetricSpectrum: return "symmetric-spectrum";
    case Method::HalfIdentityNorm: return "half-identity-norm";
    case Method::DiagonalDominance: return "diagonal-dominance";
    case Method::BlockTriangular: return "block-triangular";
    case Method::ClosedForm: return "closed-form";
    case Method::None: return "none";
  }
  return "?";
}

namespace {

// Exhaustive scan shared by the minor test and the binary switching test.
// value(mask) must be thread-safe. Returns the first mask whose value is
// below -tol (or -1) and the smallest value seen anywhere.
struct ScanResult {
  std::int64_t first_violation = -1;
  Real min_value = std::numeric_limits<Real>::infinity();
};

template <typename F>
ScanResult scan_masks(int n, Real tol, F&& value) {
  const std::int64_t total = std::int64_t(1) << n;
  std::mutex merge_mutex;
  ScanResult merged;
  parallel_for(total, [&](std::int64_t begin, std::int64_t end) {
    ScanResult local;
    for (std::int64_t mask = begin; mask < end; ++mask) {
      const Real v = value(static_cast<std::uint64_t>(mask));
      local.min_value = std::min(local.min_value, v);
      if (v < -tol && local.first_violation < 0) local.first_violation = mask;
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    merged.min_value = std::min(merged.min_value, local.min_value);
    if (local.first_violation >= 0 &&
        (merged.first_violation < 0 || local.first_violation < merged.first_violation))
      merged.first_violation = local.first_violation;
  });
  return merged;
}

}  // namespace

ValidationReport is_p0_exhaustive(const Kernel& l, int cap) {
  const int n = static_cast<int>(l.size());
  if (n > cap) fail(Errc::cap_exceeded, "exhaustive minor scan above enumeration cap");
  const Matrix& m = l.entries();
  const Real tol = minor_tolerance(m);

  ScanResult scan = scan_masks(n, tol, [&](std::uint64_t mask) {
    return principal_minor(m, SubsetMask::from_bits(n, mask));
  });

  ValidationReport report;
  report.method = Method::ExhaustiveMinors;
  report.tolerance = tol;
  report.min_value = scan.min_value;
  if (scan.first_violation >= 0) {
    report.verdict = Verdict::Invalid;
    report.witness_subset = SubsetMask::from_bits(n, static_cast<std::uint64_t>(scan.first_violation));
  } else {
    report.verdict = Verdict::Valid;
  }
  return report;
}

ValidationReport is_dpp_cara1(const Kernel& k, int cap) {
  if (k.role() != KernelRole::Correlation)
    fail(Errc::domain, "is_dpp_cara1 expects a correlation kernel");
  const int n = static_cast<int>(k.size());
  if (n > cap) fail(Errc::cap_exceeded, "binary switching scan above enumeration cap");
  const Matrix& m = k.entries();
  const Real tol = minor_tolerance(m);

  ScanResult scan = scan_masks(n, tol, [&](std::uint64_t mask) {
    Vector p = Vector::Zero(n);
    for (int i = 0; i < n; ++i)
      if (mask & (std::uint64_t(1) << i)) p(i) = 1.0;
    return determinant(blend_rows(m, p));
  });

  ValidationReport report;
  report.method = Method::Cara1;
  report.tolerance = tol;
  report.min_value = scan.min_value;
  if (scan.first_violation >= 0) {
    report.verdict = Verdict::Invalid;
    report.witness_subset = SubsetMask::from_bits(n, static_cast<std::uint64_t>(scan.first_violation));
  } else {
    report.verdict = Verdict::Valid;
  }
  return report;
}

ValidationReport is_dpp_cara2_randomized(const Kernel& k, int trials, std::uint64_t rng_seed) {
  if (k.role() != KernelRole::Correlation)
    fail(Errc::domain, "is_dpp_cara2_randomized expects a correlation kernel");
  if (trials < 1) fail(Errc::domain, "trials must be >= 1");
  const int n = static_cast<int>(k.size());
  const Matrix& m = k.entries();

  ValidationReport report;
  report.method = Method::Cara2Randomized;
  report.tolerance = 0.0;
  Real min_seen = std::numeric_limits<Real>::infinity();
  for (int t = 0; t < trials; ++t) {
    RngStream rng(rng_seed, static_cast<std::uint64_t>(t));
    Vector p(n);
    for (int i = 0; i < n; ++i) {
      Real u;
      do {
        u = rng.next_double();
      } while (u == 0.0);  // open interval
      p(i) = u;
    }
    const Real det = determinant(blend_rows(m, p));
    min_seen = std::min(min_seen, det);
    if (det <= 0.0) {
      report.verdict = Verdict::Invalid;
      report.witness_vector = p;
      report.min_value = min_seen;
      return report;
    }
  }
  report.verdict = Verdict::Unknown;
  report.min_value = min_seen;
  return report;
}

bool cara3_violation_check(const Kernel& k, const Vector& x) {
  if (k.role() != KernelRole::Correlation)
    fail(Errc::domain, "cara3_violation_check expects a correlation kernel");
  if (x.size() != k.size()) fail(Errc::dim_mismatch, "vector length does not match kernel size");
  if (x.isZero(0.0)) fail(Errc::zero_vector, "cara3 requires a nonzero vector");
  const Vector kx = k.entries() * x;
  for (Index i = 0; i < x.size(); ++i) {
    const bool fails_here =
        x(i) * kx(i) < 0.0 || std::abs(kx(i)) > std::abs(x(i)) || x(i) == 0.0;
    if (!fails_here) return false;
  }
  return true;
}

Real spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix gram = m.transpose() * m;
  const Index n = gram.rows();

  // Deterministic pseudo-random start vector.
  RngStream rng(0x5eedba11u, 0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.next_double() + 0.5;
  v.normalize();

  Real lambda = 0.0;
  const Index max_iter = 10 * n;
  for (Index it = 0; it < max_iter; ++it) {
    Vector w = gram * v;
    const Real norm = w.norm();
    if (norm == 0.0) break;  // start vector landed in the null space; decide by SVD
    const Real next = v.dot(w);
    w /= norm;
    const bool converged = std::abs(next - lambda) <= 1e-12 * std::max<Real>(1.0, std::abs(next));
    lambda = next;
    v.swap(w);
    if (converged && it > 0) return std::sqrt(std::max<Real>(lambda, 0.0));
  }
  // Power iteration did not settle (clustered top singular values); use a
  // dense SVD instead.
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

namespace {

// Strongly connected components of the nonzero pattern of m (Tarjan,
// iterative). Two indices share a component iff each reaches the other
// through nonzero entries; the matrix is block-triangularizable iff there is
// more than one component.
std::vector<std::vector<int>> nonzero_sccs(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && m(i, j) != 0.0) adj[i].push_back(j);

  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::vector<int>> components;
  int counter = 0;

  struct Frame {
    int node;
    std::size_t child;
  };
  for (int start = 0; start < n; ++start) {
    if (index[start] != -1) continue;
    std::vector<Frame> frames{{start, 0}};
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < adj[f.node].size()) {
        const int next = adj[f.node][f.child++];
        if (index[next] == -1) {
          index[next] = low[next] = counter++;
          stack.push_back(next);
          on_stack[next] = true;
          frames.push_back({next, 0});
        } else if (on_stack[next]) {
          low[f.node] = std::min(low[f.node], index[next]);
        }
      } else {
        if (low[f.node] == index[f.node]) {
          std::vector<int> comp;
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp.push_back(w);
          } while (w != f.node);
          std::sort(comp.begin(), comp.end());
          components.push_back(std::move(comp));
        }
        const int node = f.node;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().node] = std::min(low[frames.back().node], low[node]);
      }
    }
  }
  return components;
}

}  // namespace

ValidationReport sufficient_conditions(const Kernel& k) {
  if (k.role() != KernelRole::Correlation)
    fail(Errc::domain, "sufficient_conditions expects a correlation kernel");
  const Matrix& m = k.entries();
  const Index n = m.rows();
  ValidationReport report;

  // (a) Symmetric case: the spectrum test is exact in both directions.
  if ((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success) fail(Errc::convergence_failure, "symmetric eigensolver failed");
    const Real tol = 1e-9;
    report.method = Method::SymmetricSpectrum;
    report.tolerance = tol;
    report.min_value = es.eigenvalues().minCoeff();
    Index worst = 0;
    Real excess = 0.0;
    for (Index i = 0; i < n; ++i) {
      const Real e = std::max(-es.eigenvalues()(i), es.eigenvalues()(i) - 1.0);
      if (e > excess) {
        excess = e;
        worst = i;
      }
    }
    if (excess > tol) {
      report.verdict = Verdict::Invalid;
      report.witness_vector = es.eigenvectors().col(worst);
    } else {
      report.verdict = Verdict::Valid;
    }
    return report;
  }

  // (b) Half-identity ball: ||I - 2K||_2 <= 1.
  {
    const Real norm = spectral_norm(Matrix::Identity(n, n) - 2.0 * m);
    if (norm <= 1.0 + 1e-12) {
      report.verdict = Verdict::Valid;
      report.method = Method::HalfIdentityNorm;
      report.tolerance = 1e-12;
      report.min_value = norm;
      return report;
    }
  }

  // (c) Row diagonal dominance of both K and I - K.
  {
    bool dominant = true;
    for (Index i = 0; i < n && dominant; ++i) {
      const Real off = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
      dominant = std::min(m(i, i), 1.0 - m(i, i)) > off;
    }
    if (dominant) {
      report.verdict = Verdict::Valid;
      report.method = Method::DiagonalDominance;
      report.tolerance = 0.0;
      return report;
    }
  }

  // (d) Block-triangular structure: valid iff all diagonal blocks are.
  {
    std::vector<std::vector<int>> comps = nonzero_sccs(m);
    if (comps.size() > 1) {
      report.method = Method::BlockTriangular;
      report.verdict = Verdict::Valid;
      for (const std::vector<int>& comp : comps) {
        ValidationReport sub = sufficient_conditions(correlation(submatrix(m, comp, comp)));
        if (sub.verdict == Verdict::Invalid) {
          report.verdict = Verdict::Invalid;
          report.witness_subset = SubsetMask(static_cast<int>(n), comp);
          report.tolerance = sub.tolerance;
          return report;
        }
        if (sub.verdict == Verdict::Unknown) report.verdict = Verdict::Unknown;
      }
      return report;
    }
  }

  report.verdict = Verdict::Unknown;
  report.method = Method::None;
  return report;
}

Kernel shrink_to_center(const Kernel& k, Real t) {
  if (k.role() != KernelRole::Correlation)
    fail(Errc::domain, "shrink_to_center expects a correlation kernel");
  if (!(t >= 0.0 && t <= 1.0)) fail(Errc::domain, "shrink parameter must lie in [0, 1]");
  Matrix out = (1.0 - t) * k.entries();
  out.diagonal().array() += 0.5 * t;
  return correlation(std::move(out));
}

}  // namespace nsdpp
