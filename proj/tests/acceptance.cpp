// Acceptance suite: one line of output per criterion, [PASS]/[FAIL].
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <vector>

#include "nsdpp/constructions.hpp"
#include "nsdpp/couplings.hpp"
#include "nsdpp/grid.hpp"
#include "nsdpp/io.hpp"
#include "nsdpp/oracle.hpp"
#include "nsdpp/sampling.hpp"
#include "nsdpp/spectrum.hpp"
#include "nsdpp/transforms.hpp"
#include "nsdpp/validation.hpp"
#include "test_support.hpp"

using namespace nsdpp;
using namespace nsdpp::testing;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
};

int failures = 0;
std::vector<Kernel> valid_pool;  // every certified-valid kernel from criteria 1-4

void run_criterion(int id, const std::string& name, Real budget_seconds,
                   const std::function<void(Check&)>& body) {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.require(false, std::string("exception: ") + e.what());
  }
  const Real elapsed =
      std::chrono::duration<Real>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0)
    check.require(elapsed < budget_seconds,
                  "runtime " + std::to_string(elapsed) + "s over budget " +
                      std::to_string(budget_seconds) + "s");
  if (!check.ok) ++failures;
  std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n", check.ok ? "PASS" : "FAIL", id, name.c_str(),
              elapsed, check.ok ? "" : " — ", check.ok ? "" : check.detail.str().c_str());
  std::fflush(stdout);
}

Real max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// --- criterion bodies --------------------------------------------------------

void criterion1_oracle_coherence(Check& check) {
  RngStream rng(0xAC01, 0);
  Real worst_sum = 0.0, worst_incl = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 7);
    const Kernel k = random_valid_kernel(rng, n);
    if (is_dpp_cara1(k).verdict != Verdict::Valid) {
      check.require(false, "generator produced a non-certified kernel");
      continue;
    }
    valid_pool.push_back(k);
    const ProbabilityTable table = enumerate_distribution(k);  // throws if sum is off
    Real sum = 0.0;
    for (Real p : table.probs) sum += p;
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    worst_incl = std::max(worst_incl, inclusion_consistency(k));
  }
  check.require(worst_incl < 1e-9, "inclusion consistency " + std::to_string(worst_incl));
  check.detail << "max |sum-1| " << worst_sum << ", max inclusion error " << worst_incl;
  if (check.ok) check.detail.str("");
}

void criterion2_characterizations(Check& check) {
  RngStream rng(0xAC02, 0);
  int invalid_count = 0, witness_count = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Kernel k = correlation(random_matrix(rng, 5, -0.5, 1.5));
    const Real tol = minor_tolerance(k.entries());

    // exhaustive set-probability nonnegativity, computed independently of cara1
    Real min_prob = std::numeric_limits<Real>::infinity();
    for (std::uint64_t mask = 0; mask < 32; ++mask)
      min_prob = std::min(min_prob, set_probability(k, SubsetMask::from_bits(5, mask)));
    const bool exhaustive_valid = min_prob >= -tol;

    const ValidationReport cara1 = is_dpp_cara1(k);
    check.require((cara1.verdict == Verdict::Valid) == exhaustive_valid,
                  "cara1 disagrees with exhaustive nonnegativity");

    if (cara1.verdict == Verdict::Valid) {
      valid_pool.push_back(k);
    } else {
      ++invalid_count;
    }

    // any coordinatewise witness implies cara1 invalidity
    for (int probe = 0; probe < 40; ++probe) {
      const Vector x = random_vector(rng, 5, -1.0, 1.0);
      if (x.isZero(0.0)) continue;
      if (cara3_violation_check(k, x)) {
        ++witness_count;
        check.require(cara1.verdict == Verdict::Invalid,
                      "cara3 witness on a cara1-valid kernel");
        break;
      }
    }

    // the randomized interior test never condemns a valid kernel
    const ValidationReport cara2 = is_dpp_cara2_randomized(k, 200, rng.next_u64());
    if (cara1.verdict == Verdict::Valid)
      check.require(cara2.verdict != Verdict::Invalid,
                    "cara2 returned Invalid on a cara1-valid kernel");
  }
  check.require(invalid_count > 50 && witness_count > 20,
                "matrix family exercised too few invalid cases");
}

void criterion3_transform_laws(Check& check) {
  RngStream rng(0xAC03, 0);
  Real worst_ph = 0.0, worst_switch = 0.0, worst_ppt = 0.0;

  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 7);
    const Kernel k = random_valid_kernel(rng, n);
    valid_pool.push_back(k);
    const ProbabilityTable base = enumerate_distribution(k);

    const SubsetMask s = random_subset(rng, n);
    worst_ph = std::max(worst_ph, tv_distance(enumerate_distribution(particle_hole(k, s)),
                                              symmetric_difference_pushforward(base, s)));

    const Vector p = random_vector(rng, n, 0.0, 1.0);
    ProbabilityTable mixture{n, std::vector<Real>(base.probs.size(), 0.0)};
    for (std::uint64_t flips = 0; flips < base.probs.size(); ++flips) {
      Real weight = 1.0;
      for (int i = 0; i < n; ++i)
        weight *= (flips & (std::uint64_t(1) << i)) ? p(i) : 1.0 - p(i);
      for (std::uint64_t mask = 0; mask < base.probs.size(); ++mask)
        mixture.probs[mask ^ flips] += weight * base.probs[mask];
    }
    worst_switch = std::max(
        worst_switch, tv_distance(enumerate_distribution(switching_kernel(k, p)), mixture));
  }
  check.require(worst_ph < 1e-9, "particle-hole pushforward TV " + std::to_string(worst_ph));
  check.require(worst_switch < 1e-9, "switching mixture TV " + std::to_string(worst_switch));

  int done = 0;
  while (done < 100) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);
    const Kernel k = random_valid_kernel(rng, n);
    if (std::abs(determinant(Matrix::Identity(n, n) - k.entries())) < 1e-4) continue;
    const Kernel l = k_to_l(k);
    const SubsetMask s = random_subset(rng, n);
    if (!s.empty() && std::abs(determinant(principal_submatrix(l.entries(), s))) < 1e-4) continue;
    Kernel lt = lensemble(Matrix::Identity(n, n));
    try {
      lt = ppt_lensemble_particle_hole(l, s);
    } catch (const Error&) {
      continue;  // ill-conditioned draw; the criterion targets well-conditioned cases
    }
    const Matrix via_l = l_to_k(lt).entries();
    const Matrix via_k = particle_hole(k, s).entries();
    worst_ppt = std::max(worst_ppt, (via_l - via_k).cwiseAbs().maxCoeff());
    ++done;
  }
  check.require(worst_ppt < 1e-8, "ppt commutation error " + std::to_string(worst_ppt));
}

void criterion4_cardinality(Check& check) {
  RngStream rng(0xAC04, 0);
  Real worst_pmf = 0.0, worst_moment = 0.0, worst_conv = 0.0;
  int decomposed = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 9);
    const Kernel k = random_valid_kernel(rng, n);
    valid_pool.push_back(k);

    const CardinalityLaw law = cardinality_law(k);
    const Vector oracle = cardinality_from_table(enumerate_distribution(k));
    worst_pmf = std::max(worst_pmf, max_abs(law.pmf - oracle));

    const auto [mean, variance] = expected_and_variance(k);
    Real pmf_mean = 0.0, pmf_second = 0.0;
    for (Index j = 0; j < law.pmf.size(); ++j) {
      pmf_mean += j * law.pmf(j);
      pmf_second += Real(j) * j * law.pmf(j);
    }
    worst_moment = std::max(worst_moment, std::abs(pmf_mean - mean));
    worst_moment =
        std::max(worst_moment, std::abs((pmf_second - pmf_mean * pmf_mean) - variance));

    try {
      const Vector conv = convolve_components(bernoulli_decomposition(law.source_spectrum));
      worst_conv = std::max(worst_conv, 0.5 * (conv - law.pmf).cwiseAbs().sum());
      ++decomposed;
    } catch (const Error& e) {
      if (e.code() != Errc::out_of_region) throw;  // outside B(1/2,1/2): not applicable
    }
  }
  check.require(worst_pmf < 1e-8, "pmf error " + std::to_string(worst_pmf));
  check.require(worst_moment < 1e-9, "trace identity error " + std::to_string(worst_moment));
  check.require(worst_conv < 1e-9, "decomposition TV " + std::to_string(worst_conv));
  check.require(decomposed > 100, "decomposition applied too rarely");
}

void criterion5_eigenvalue_region(Check& check) {
  int violations = 0;
  for (const Kernel& k : valid_pool) {
    const std::vector<bool> inside = region_membership(eigenvalues(k), static_cast<int>(k.size()));
    for (bool b : inside)
      if (!b) ++violations;
  }
  check.require(!valid_pool.empty(), "no kernels collected from criteria 1-4");
  check.require(violations == 0,
                std::to_string(violations) + " eigenvalues outside the admissible region");
}

void criterion6_constructions(Check& check) {
  RngStream rng(0xAC06, 0);

  Real worst_companion = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 8);
    Vector coeffs(n);
    for (int i = 0; i < n; ++i) coeffs(i) = rng.uniform(0.0, 2.5);
    const ProbabilityTable closed = companion_distribution({coeffs});
    const ProbabilityTable oracle = enumerate_distribution(companion_k({coeffs}));
    for (std::size_t mask = 0; mask < closed.probs.size(); ++mask)
      worst_companion =
          std::max(worst_companion, std::abs(closed.probs[mask] - oracle.probs[mask]));
  }
  check.require(worst_companion < 1e-10, "companion mass error " + std::to_string(worst_companion));

  Real worst_complement = 0.0, worst_card = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 9);
    Vector u = random_vector(rng, n, -1.0, 1.0);
    Vector v = random_vector(rng, n, -1.0, 1.0);
    const Real total = u.cwiseProduct(v).cwiseAbs().sum();
    if (total > 0.0) v *= rng.uniform(0.05, 1.0) / total;

    const auto [k, report] = half_identity_rank_one(u, v);
    check.require(report.verdict == Verdict::Valid, "admissible spec reported invalid");
    const ProbabilityTable table = enumerate_distribution(k);
    const std::uint64_t all = (std::uint64_t(1) << n) - 1;
    const Real target = std::ldexp(1.0, 1 - n);
    for (std::uint64_t mask = 0; mask < table.probs.size(); ++mask)
      worst_complement =
          std::max(worst_complement, std::abs(table.probs[mask] + table.probs[all ^ mask] - target));

    worst_card = std::max(
        worst_card, max_abs(half_identity_rank_one_cardinality(u, v).pmf -
                            cardinality_from_table(table)));
  }
  check.require(worst_complement < 1e-12,
                "complement identity error " + std::to_string(worst_complement));
  check.require(worst_card < 1e-10, "cardinality closed-form error " + std::to_string(worst_card));
}

void criterion7_couplings(Check& check) {
  RngStream rng(0xAC07, 0);

  Real worst_support = 0.0, worst_marginal = 0.0, worst_cov = 0.0, worst_norm = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 4);
    const Kernel k = random_valid_kernel(rng, n);
    const ProbabilityTable base = enumerate_distribution(k);

    // complement: all mass on (S, S^c)
    const ProbabilityTable comp = enumerate_distribution(complement_coupling(k).as_kernel());
    // identical: all mass on (S, S)
    const ProbabilityTable ident = enumerate_distribution(identical_coupling(k).as_kernel());
    const std::uint64_t low = (std::uint64_t(1) << n) - 1;
    for (std::uint64_t mask = 0; mask < comp.probs.size(); ++mask) {
      const std::uint64_t m1 = mask & low, m2 = mask >> n;
      if (m2 != (~m1 & low)) worst_support = std::max(worst_support, std::abs(comp.probs[mask]));
      if (m2 != m1) worst_support = std::max(worst_support, std::abs(ident.probs[mask]));
    }

    // split of K/2 (2*(K/2) = K is valid by construction)
    const Kernel halfk = correlation(0.5 * k.entries());
    const ProbabilityTable split = enumerate_distribution(split_coupling(halfk).as_kernel());
    for (std::uint64_t mask = 0; mask < split.probs.size(); ++mask) {
      const std::uint64_t m1 = mask & low, m2 = mask >> n;
      if (m1 & m2) worst_support = std::max(worst_support, std::abs(split.probs[mask]));
    }

    // attractive construction on a symmetric kernel
    const Kernel sym = random_symmetric_valid(rng, std::max(2, static_cast<int>(n)));
    const CouplingKernel ck = attractive_coupling(random_attractive_spec(sym, rng.next_u64()));
    const Index half = ck.half();
    worst_norm = std::max(
        worst_norm, spectral_norm(ck.full - 0.5 * Matrix::Identity(2 * half, 2 * half)));
    const ProbabilityTable joint = enumerate_distribution(ck.as_kernel());
    const ProbabilityTable target = enumerate_distribution(sym);
    worst_marginal = std::max(
        worst_marginal, tv_distance(marginal_table(joint, static_cast<int>(half), true), target));
    worst_marginal = std::max(
        worst_marginal, tv_distance(marginal_table(joint, static_cast<int>(half), false), target));

    for (Index i = 0; i < half; ++i)
      for (Index j = 0; j < half; ++j) {
        Real joint_prob = 0.0, p1 = 0.0, p2 = 0.0;
        for (std::uint64_t mask = 0; mask < joint.probs.size(); ++mask) {
          const bool in1 = mask & (std::uint64_t(1) << i);
          const bool in2 = mask & (std::uint64_t(1) << (half + j));
          if (in1 && in2) joint_prob += joint.probs[mask];
          if (in1) p1 += joint.probs[mask];
          if (in2) p2 += joint.probs[mask];
        }
        worst_cov = std::max(
            worst_cov, std::abs(joint_prob - p1 * p2 - cross_covariance(ck, i, j)));
      }
  }
  check.require(worst_support < 1e-12, "off-support mass " + std::to_string(worst_support));
  check.require(worst_norm <= 0.5 + 1e-9, "coupling norm " + std::to_string(worst_norm));
  check.require(worst_marginal < 1e-9, "marginal TV " + std::to_string(worst_marginal));
  check.require(worst_cov < 1e-9, "cross covariance error " + std::to_string(worst_cov));
}

void criterion8_samplers(Check& check) {
  RngStream rng(0xAC08, 0);
  const int num = 200000;
  Real worst_tv = 0.0;

  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 4);
    const Kernel k = random_valid_kernel(rng, n);
    const auto samples = sample_batch_sequential(k, num, rng.next_u64());
    worst_tv =
        std::max(worst_tv, tv_distance(outcome_counts(samples, n), enumerate_distribution(k)));
  }
  check.require(worst_tv < 0.02, "sequential TV " + std::to_string(worst_tv));

  Real worst_rank1 = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 4);
    Vector u = random_vector(rng, n, -1.0, 1.0);
    Vector v = random_vector(rng, n, -1.0, 1.0);
    const Real total = u.cwiseProduct(v).cwiseAbs().sum();
    if (total > 0.0) v *= rng.uniform(0.1, 1.0) / total;
    const auto samples = sample_batch_half_identity(u, v, num, rng.next_u64());
    const ProbabilityTable table = enumerate_distribution(half_identity_rank_one(u, v).first);
    worst_rank1 = std::max(worst_rank1, tv_distance(outcome_counts(samples, n), table));
  }
  check.require(worst_rank1 < 0.02, "rank-one TV " + std::to_string(worst_rank1));

  Real worst_mix = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 4);
    Matrix m = random_matrix(rng, n, -1.0, 1.0);
    const Real norm = spectral_norm(m);
    if (norm > 0.0) m *= rng.uniform(0.1, 1.0) / norm;
    const auto samples = sample_batch_mixing(mixing_decomposition(m), num, rng.next_u64());
    Matrix target = 0.5 * m;
    target.diagonal().array() += 0.5;
    worst_mix = std::max(worst_mix, tv_distance(outcome_counts(samples, n),
                                                enumerate_distribution(correlation(target))));
  }
  check.require(worst_mix < 0.02, "mixing TV " + std::to_string(worst_mix));

  // determinism across thread counts
  const Kernel k = random_valid_kernel(rng, 4);
  const auto a = sample_batch_sequential(k, 2000, 777, 1);
  const auto b = sample_batch_sequential(k, 2000, 777, 4);
  bool identical = a.size() == b.size();
  for (std::size_t i = 0; identical && i < a.size(); ++i) identical = a[i].members == b[i].members;
  check.require(identical, "thread count changed the sample stream");
}

void criterion9_grid_reproduction(Check& check) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "nsdpp_acceptance_grid";
  fs::create_directories(dir);

  for (const bool cauchy : {false, true}) {
    const auto start = std::chrono::steady_clock::now();
    SimulationConfig config;
    config.grid_k = 30;
    config.kernel = cauchy ? default_cauchy_spec() : default_gaussian_spec();
    config.seed = cauchy ? 62 : 61;
    config.num_samples = 1;
    config.out_prefix = (dir / (cauchy ? "cauchy" : "gauss")).string();
    const SimulationResult result = run_coupled_simulation(config);
    const Real elapsed =
        std::chrono::duration<Real>(std::chrono::steady_clock::now() - start).count();
    const std::string tag = cauchy ? "cauchy" : "gaussian";

    check.require(elapsed < 600.0, tag + " run exceeded 10 minutes");
    check.require(result.diag_cross_covariance_sum > 0.0,
                  tag + " diagonal cross covariance not positive");

    // CSV parses and stays inside the unit square
    std::ifstream csv(result.points_csv);
    check.require(csv.good(), tag + " points csv missing");
    std::string line;
    int rows = 0;
    while (std::getline(csv, line)) {
      if (line.empty() || line[0] == '#') continue;
      int set_id, index;
      char comma;
      Real x, y;
      std::istringstream ls(line);
      ls >> set_id >> comma >> index >> comma >> x >> comma >> y;
      check.require(!ls.fail() && (set_id == 1 || set_id == 2), tag + " malformed csv row");
      check.require(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0, tag + " point outside grid");
      ++rows;
      if (!check.ok) break;
    }
    check.require(rows == static_cast<int>(result.set1.size() + result.set2.size()),
                  tag + " csv row count mismatch");

    // SVG flags coincident indices iff the sets intersect
    std::ifstream svg_in(result.scatter_svg);
    check.require(svg_in.good(), tag + " svg missing");
    std::stringstream svg;
    svg << svg_in.rdbuf();
    const bool has_both = svg.str().find("class=\"both\"") != std::string::npos;
    std::set<int> s1(result.set1.begin(), result.set1.end());
    bool intersects = false;
    for (int idx : result.set2) intersects = intersects || s1.count(idx) > 0;
    check.require(has_both == intersects, tag + " coincident-point flagging inconsistent");
    check.require(svg.str().find("<svg") != std::string::npos, tag + " svg content missing");
  }
  fs::remove_all(dir);
}

}  // namespace

int main() {
  std::printf("nsdpp acceptance suite\n");
  run_criterion(1, "oracle coherence (300 kernels, n <= 8)", 60.0, criterion1_oracle_coherence);
  run_criterion(2, "characterization agreement (500 matrices, 5x5)", 120.0,
                criterion2_characterizations);
  run_criterion(3, "transform laws (particle-hole, switching, ppt)", 0.0,
                criterion3_transform_laws);
  run_criterion(4, "cardinality laws (300 kernels, n <= 10)", 0.0, criterion4_cardinality);
  run_criterion(5, "eigenvalue region over all valid kernels", 0.0, criterion5_eigenvalue_region);
  run_criterion(6, "construction closed forms", 0.0, criterion6_constructions);
  run_criterion(7, "coupling support, bound, marginals, covariance", 0.0, criterion7_couplings);
  run_criterion(8, "sampler laws at N=200000 and determinism", 300.0, criterion8_samplers);
  run_criterion(9, "grid-coupling reproduction at k=30", 0.0, criterion9_grid_reproduction);

  if (failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures;
}
