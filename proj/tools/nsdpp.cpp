// nsdpp command-line front end: construct, certify, couple, sample and
// simulate finite determinantal point processes with possibly nonsymmetric
// kernels. Exit codes: 0 ok, 2 invalid kernel, 3 enumeration cap exceeded,
// 4 numeric failure. NSDPP_THREADS caps worker threads.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "nsdpp/constructions.hpp"
#include "nsdpp/couplings.hpp"
#include "nsdpp/grid.hpp"
#include "nsdpp/io.hpp"
#include "nsdpp/oracle.hpp"
#include "nsdpp/sampling.hpp"
#include "nsdpp/spectrum.hpp"
#include "nsdpp/transforms.hpp"
#include "nsdpp/validation.hpp"

using json = nlohmann::json;
using namespace nsdpp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalidKernel = 2;
constexpr int kExitCapExceeded = 3;
constexpr int kExitNumericFailure = 4;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::cap_exceeded:
      return kExitCapExceeded;
    case Errc::singular_conversion:
    case Errc::singular_pivot:
    case Errc::convergence_failure:
    case Errc::probability_range:
    case Errc::pivot_breakdown:
    case Errc::numeric_failure:
      return kExitNumericFailure;
    case Errc::invalid_double:
    case Errc::bound_violated:
    case Errc::not_symmetric:
    case Errc::negative_mass:
    case Errc::non_probability_output:
    case Errc::out_of_region:
      return kExitInvalidKernel;
    default:
      return kExitUsage;
  }
}

json report_to_json(const ValidationReport& report) {
  json out;
  out["verdict"] = to_string(report.verdict);
  out["method"] = to_string(report.method);
  out["tolerance"] = report.tolerance;
  if (std::isfinite(report.min_value)) out["min_value"] = report.min_value;
  if (report.witness_subset) {
    out["witness"] = {{"type", "subset"}, {"members", report.witness_subset->members()}};
  } else if (report.witness_vector) {
    std::vector<Real> v(report.witness_vector->data(),
                        report.witness_vector->data() + report.witness_vector->size());
    out["witness"] = {{"type", "vector"}, {"values", v}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

std::vector<int> parse_index_list(const std::string& text, int n) {
  std::vector<int> members;
  std::string cleaned = text;
  for (char& c : cleaned)
    if (c == ',') c = ' ';
  std::istringstream in(cleaned);
  int idx;
  while (in >> idx) {
    if (idx < 0 || idx >= n) fail(Errc::index_out_of_range, "observed index outside [0, n)");
    members.push_back(idx);
  }
  if (!in.eof()) fail(Errc::domain, "malformed index list");
  return members;
}

Vector json_vector(const json& arr) {
  if (!arr.is_array()) fail(Errc::domain, "expected a JSON array of numbers");
  Vector v(static_cast<Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Index>(i)) = arr[i].get<Real>();
  return v;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::domain, "cannot open " + path);
  json j;
  in >> j;
  return j;
}

// --- validate ---------------------------------------------------------------

int cmd_validate(const std::string& kernel_path, const std::string& role, int cap,
                 std::uint64_t seed, int trials) {
  const Matrix m = read_mtxt(kernel_path);
  ValidationReport report;
  if (role == "l") {
    const Kernel l = lensemble(m);
    if (m.rows() <= cap) {
      report = is_p0_exhaustive(l, cap);
    } else {
      report = sufficient_conditions(l_to_k(l));
    }
  } else {
    const Kernel k = correlation(m);
    report = sufficient_conditions(k);
    if (report.verdict == Verdict::Unknown) {
      if (m.rows() <= cap) {
        report = is_dpp_cara1(k, cap);
      } else {
        report = is_dpp_cara2_randomized(k, trials, seed);
      }
    }
  }
  std::cout << report_to_json(report).dump(2) << "\n";
  return report.verdict == Verdict::Invalid ? kExitInvalidKernel : kExitOk;
}

// --- make -------------------------------------------------------------------

int cmd_make(const std::string& family, const std::string& params_path, const std::string& out) {
  const json params = load_json(params_path);
  Kernel kernel = correlation(Matrix::Zero(1, 1));
  std::optional<ValidationReport> report;

  if (family == "companion") {
    const CompanionSpec spec{json_vector(params.at("coeffs"))};
    const std::string role = params.value("role", "k");
    kernel = role == "l" ? companion_l(spec) : companion_k(spec);
  } else if (family == "rank1") {
    RankOneSpec spec{json_vector(params.at("u")), json_vector(params.at("v")),
                     params.at("lambda").get<Real>()};
    auto [k, r] = rank_one_kernel(spec);
    kernel = k;
    report = r;
  } else if (family == "half1") {
    auto [k, r] = half_identity_rank_one(json_vector(params.at("u")), json_vector(params.at("v")));
    kernel = k;
    report = r;
  } else {
    fail(Errc::domain, "unknown family: " + family);
  }

  write_mtxt(out, kernel.entries());
  json summary;
  summary["family"] = family;
  summary["n"] = kernel.size();
  summary["out"] = out;
  if (report) summary["report"] = report_to_json(*report);
  std::cout << summary.dump(2) << "\n";
  return report && report->verdict == Verdict::Invalid ? kExitInvalidKernel : kExitOk;
}

// --- couple -----------------------------------------------------------------

int cmd_couple(const std::string& mode, const std::string& kernel_path,
               const std::string& kernel2_path, Real mu_scale, std::uint64_t seed,
               const std::string& out) {
  const Kernel k = correlation(read_mtxt(kernel_path));
  CouplingKernel ck = make_coupling(Matrix::Zero(2, 2));
  if (mode == "independent") {
    const Kernel k2 = kernel2_path.empty() ? k : correlation(read_mtxt(kernel2_path));
    ck = independent_coupling(k, k2);
  } else if (mode == "complement") {
    ck = complement_coupling(k);
  } else if (mode == "identical") {
    ck = identical_coupling(k);
  } else if (mode == "split") {
    ck = split_coupling(k);
  } else if (mode == "attractive") {
    ck = attractive_coupling(random_attractive_spec(k, seed, mu_scale));
  } else {
    fail(Errc::domain, "unknown coupling mode: " + mode);
  }
  write_mtxt(out, ck.full);

  Real diag_cov = 0.0;
  for (Index i = 0; i < ck.half(); ++i) diag_cov += cross_covariance(ck, i, i);
  json summary;
  summary["mode"] = mode;
  summary["n"] = ck.half();
  summary["diag_cross_covariance_sum"] = diag_cov;
  summary["out"] = out;
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

// --- sample -----------------------------------------------------------------

int cmd_sample(const std::string& kernel_path, int num, std::uint64_t seed,
               const std::string& method, const std::string& out, int cap) {
  const Matrix m = read_mtxt(kernel_path);
  const Kernel k = correlation(m);
  std::vector<SubsetSample> samples;
  if (method == "seq") {
    samples = sample_batch_sequential(k, num, seed);
  } else if (method == "enum") {
    samples = sample_batch_enumeration(k, num, seed, 0, cap);
  } else if (method == "mix") {
    Matrix dev = 2.0 * m;
    dev.diagonal().array() -= 1.0;  // M with K = (I + M)/2
    samples = sample_batch_mixing(mixing_decomposition(dev), num, seed);
  } else if (method == "rank1") {
    Matrix dev = 2.0 * m;
    dev.diagonal().array() -= 1.0;
    Eigen::JacobiSVD<Matrix> svd(dev, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    if (sv.size() > 1 && sv(1) > 1e-9 * std::max<Real>(1.0, sv(0)))
      fail(Errc::domain, "kernel is not a rank-one perturbation of I/2");
    const Vector u = sv(0) * svd.matrixU().col(0);
    const Vector v = svd.matrixV().col(0);
    samples = sample_batch_half_identity(u, v, num, seed);
  } else {
    fail(Errc::domain, "unknown sampling method: " + method);
  }
  write_samples_csv(out, samples);
  json summary;
  summary["n"] = k.size();
  summary["num"] = num;
  summary["seed"] = seed;
  summary["method"] = method;
  summary["out"] = out;
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

// --- cardinality ------------------------------------------------------------

int cmd_cardinality(const std::string& kernel_path) {
  const Kernel k = correlation(read_mtxt(kernel_path));
  const auto [mean, variance] = expected_and_variance(k);
  const CardinalityLaw law = cardinality_law(k);
  json out;
  out["mean"] = mean;
  out["variance"] = variance;
  std::vector<Real> pmf(law.pmf.data(), law.pmf.data() + law.pmf.size());
  out["pmf"] = pmf;
  json spectrum = json::array();
  for (Index i = 0; i < law.source_spectrum.values.size(); ++i)
    spectrum.push_back({law.source_spectrum.values(i).real(),
                        law.source_spectrum.values(i).imag()});
  out["spectrum"] = spectrum;
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

// --- oracle -----------------------------------------------------------------

int cmd_oracle(const std::string& kernel_path, const std::string& out, int cap) {
  const Kernel k = correlation(read_mtxt(kernel_path));
  const ProbabilityTable table = enumerate_distribution(k, cap);
  write_oracle_csv(out, table);
  json summary;
  summary["n"] = table.n;
  summary["subsets"] = table.probs.size();
  summary["out"] = out;
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

// --- grid-sim ---------------------------------------------------------------

int cmd_grid_sim(const std::string& config_path) {
  const json j = load_json(config_path);
  if (j.value("schema", "") != "nsdpp-config/1")
    fail(Errc::domain, "config schema must be \"nsdpp-config/1\"");

  SimulationConfig config;
  config.grid_k = j.value("grid_k", 30);
  const std::string family = j.value("family", "gaussian");
  config.kernel = family == "cauchy" ? default_cauchy_spec() : default_gaussian_spec();
  if (family != "gaussian" && family != "cauchy")
    fail(Errc::domain, "family must be gaussian or cauchy");
  if (j.contains("amplitude")) config.kernel.amplitude = j["amplitude"].get<Real>();
  if (j.contains("scale")) config.kernel.scale = j["scale"].get<Real>();
  if (j.contains("exponent")) config.kernel.exponent = j["exponent"].get<Real>();
  config.mu_scale = j.value("mu_scale", 1.0);
  config.seed = j.value("seed", std::uint64_t(0));
  config.num_samples = j.value("num_samples", 1);
  config.out_prefix = j.at("out_prefix").get<std::string>();

  const SimulationResult result = run_coupled_simulation(config);
  json summary;
  summary["grid_k"] = config.grid_k;
  summary["n"] = (config.grid_k + 1) * (config.grid_k + 1);
  summary["family"] = family;
  summary["set1_size"] = result.set1.size();
  summary["set2_size"] = result.set2.size();
  summary["diag_cross_covariance_sum"] = result.diag_cross_covariance_sum;
  summary["points_csv"] = result.points_csv;
  summary["coupling_mtxt"] = result.coupling_mtxt;
  summary["scatter_svg"] = result.scatter_svg;
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

// --- cond-map ---------------------------------------------------------------

int cmd_cond_map(const std::string& coupling_path, const std::string& observed_text, int grid_k,
                 const std::string& out) {
  const Matrix full = read_mtxt(coupling_path);
  const CouplingKernel ck = make_coupling(full);
  const int n = static_cast<int>(ck.half());
  const SubsetMask observed(n, parse_index_list(observed_text, n));
  const Vector probs = conditional_inclusion_map(ck, observed);

  if (grid_k <= 0) {
    // infer the grid from n = (k+1)^2 when possible
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<Real>(n))));
    if (side * side != n || side < 2)
      fail(Errc::domain, "cannot infer grid size; pass --grid-k");
    grid_k = side - 1;
  }
  const GridGeometry geom = make_grid(grid_k);
  if (static_cast<int>(geom.points.size()) != n)
    fail(Errc::dim_mismatch, "grid size does not match coupling dimension");
  write_conditional_map_csv(out, geom, probs);

  json summary;
  summary["n"] = n;
  summary["observed"] = observed.members();
  summary["out"] = out;
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite determinantal point processes with nonsymmetric kernels"};
  app.require_subcommand(1);

  // validate
  auto* validate = app.add_subcommand("validate", "certify a kernel matrix");
  std::string v_kernel, v_role = "k";
  int v_cap = kDefaultEnumerationCap, v_trials = 1000;
  std::uint64_t v_seed = 0;
  validate->add_option("--kernel", v_kernel, "kernel in MTXT format")->required();
  validate->add_option("--role", v_role, "k (correlation) or l (L-ensemble)")
      ->check(CLI::IsMember({"k", "l"}));
  validate->add_option("--cap", v_cap, "exhaustive enumeration cap");
  validate->add_option("--seed", v_seed, "seed for the randomized interior test");
  validate->add_option("--trials", v_trials, "trials for the randomized interior test");

  // make
  auto* make = app.add_subcommand("make", "construct a kernel from a family");
  std::string m_family, m_params, m_out;
  make->add_option("--family", m_family, "companion | rank1 | half1")->required();
  make->add_option("--params", m_params, "JSON parameter file")->required();
  make->add_option("--out", m_out, "output kernel path (MTXT)")->required();

  // couple
  auto* couple = app.add_subcommand("couple", "build a 2n x 2n coupling kernel");
  std::string c_mode, c_kernel, c_kernel2, c_out;
  Real c_mu_scale = 1.0;
  std::uint64_t c_seed = 0;
  couple->add_option("--mode", c_mode, "independent | complement | identical | split | attractive")
      ->required();
  couple->add_option("--kernel", c_kernel, "marginal kernel (MTXT)")->required();
  couple->add_option("--kernel2", c_kernel2, "second marginal for independent mode");
  couple->add_option("--mu-scale", c_mu_scale, "scale of the random attractive cross terms");
  couple->add_option("--seed", c_seed, "seed for the attractive parameter rule");
  couple->add_option("--out", c_out, "output coupling path (MTXT)")->required();

  // sample
  auto* sample = app.add_subcommand("sample", "draw exact samples");
  std::string s_kernel, s_method = "seq", s_out;
  int s_num = 1, s_cap = kDefaultEnumerationCap;
  std::uint64_t s_seed = 0;
  sample->add_option("--kernel", s_kernel, "kernel (MTXT)")->required();
  sample->add_option("--num", s_num, "number of samples")->required();
  sample->add_option("--seed", s_seed, "batch seed");
  sample->add_option("--method", s_method, "seq | enum | mix | rank1")
      ->check(CLI::IsMember({"seq", "enum", "mix", "rank1"}));
  sample->add_option("--cap", s_cap, "enumeration cap for the enum method");
  sample->add_option("--out", s_out, "output CSV path")->required();

  // cardinality
  auto* card = app.add_subcommand("cardinality", "law of the number of points");
  std::string d_kernel;
  card->add_option("--kernel", d_kernel, "kernel (MTXT)")->required();

  // oracle
  auto* oracle = app.add_subcommand("oracle", "full 2^n distribution table");
  std::string o_kernel, o_out;
  int o_cap = kDefaultEnumerationCap;
  oracle->add_option("--kernel", o_kernel, "kernel (MTXT)")->required();
  oracle->add_option("--cap", o_cap, "enumeration cap");
  oracle->add_option("--out", o_out, "output CSV path")->required();

  // grid-sim
  auto* grid = app.add_subcommand("grid-sim", "coupled simulation on a regular grid");
  std::string g_config;
  grid->add_option("--config", g_config, "JSON config (schema nsdpp-config/1)")->required();

  // cond-map
  auto* cond = app.add_subcommand("cond-map", "conditional inclusion probabilities");
  std::string n_coupling, n_observed, n_out;
  int n_grid_k = 0;
  cond->add_option("--coupling", n_coupling, "coupling kernel (MTXT)")->required();
  cond->add_option("--observed", n_observed,
                   "observed first-block indices, comma or space separated (may be empty)");
  cond->add_option("--grid-k", n_grid_k, "grid parameter for coordinates (inferred when omitted)");
  cond->add_option("--out", n_out, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(v_kernel, v_role, v_cap, v_seed, v_trials);
    if (*make) return cmd_make(m_family, m_params, m_out);
    if (*couple) return cmd_couple(c_mode, c_kernel, c_kernel2, c_mu_scale, c_seed, c_out);
    if (*sample) return cmd_sample(s_kernel, s_num, s_seed, s_method, s_out, s_cap);
    if (*card) return cmd_cardinality(d_kernel);
    if (*oracle) return cmd_oracle(o_kernel, o_out, o_cap);
    if (*grid) return cmd_grid_sim(g_config);
    if (*cond) return cmd_cond_map(n_coupling, n_observed, n_grid_k, n_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
