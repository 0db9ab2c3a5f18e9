#include "nsdpp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "nsdpp/io.hpp"
#include "nsdpp/sampling.hpp"

namespace nsdpp {

GridGeometry make_grid(int k) {
  if (k < 1) fail(Errc::domain, "grid parameter k must be >= 1");
  GridGeometry geom;
  geom.k = k;
  const int side = k + 1;
  geom.points.reserve(static_cast<std::size_t>(side) * side);
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j)
      geom.points.push_back({static_cast<Real>(i) / k, static_cast<Real>(j) / k});
  return geom;
}

RadialKernelSpec default_gaussian_spec() { return {RadialFamily::Gaussian, 0.02, 0.018, 1.1}; }
RadialKernelSpec default_cauchy_spec() { return {RadialFamily::Cauchy, 0.02, 0.075, 1.1}; }

Kernel grid_kernel(const GridGeometry& geom, const RadialKernelSpec& spec) {
  if (!(spec.amplitude >= 0.0 && spec.amplitude <= 1.0))
    fail(Errc::domain, "kernel amplitude must lie in [0, 1]");
  if (!(spec.scale > 0.0)) fail(Errc::domain, "kernel scale must be positive");
  if (spec.family == RadialFamily::Cauchy && !(spec.exponent > 0.0))
    fail(Errc::domain, "Cauchy exponent must be positive");

  const Index n = static_cast<Index>(geom.points.size());
  Matrix k(n, n);
  for (Index a = 0; a < n; ++a) {
    k(a, a) = spec.amplitude;
    for (Index b = a + 1; b < n; ++b) {
      const Real dx = geom.points[a][0] - geom.points[b][0];
      const Real dy = geom.points[a][1] - geom.points[b][1];
      const Real d2 = dx * dx + dy * dy;
      Real value;
      if (spec.family == RadialFamily::Gaussian) {
        value = spec.amplitude * std::exp(-d2 / spec.scale);
      } else {
        value = spec.amplitude * std::pow(1.0 + d2 / (spec.scale * spec.scale), -spec.exponent);
      }
      k(a, b) = value;
      k(b, a) = value;
    }
  }
  return correlation(std::move(k));
}

Vector conditional_inclusion_map(const CouplingKernel& ck, const SubsetMask& observed) {
  const Index n = ck.half();
  if (observed.n() != n) fail(Errc::dim_mismatch, "observation ground set does not match coupling");
  Matrix a = ck.full;
  for (Index i = 0; i < n; ++i) {
    const Real p = sequential_inclusion_probability(a, i);
    const bool include = observed.contains(static_cast<int>(i));
    // The observation's probability is the product of these branch
    // conditionals; a vanishing branch means conditioning on a null event.
    if ((include ? p : 1.0 - p) < 1e-12)
      fail(Errc::pivot_breakdown, "observation has probability 0 under the coupling");
    apply_sequential_pivot(a, i, include);
  }
  Vector diag = a.bottomRightCorner(n, n).diagonal();
  for (Index i = 0; i < n; ++i) {
    if (diag(i) < -1e-8 || diag(i) > 1.0 + 1e-8)
      fail(Errc::probability_range, "conditional inclusion probability outside [0, 1] band");
    diag(i) = std::clamp(diag(i), 0.0, 1.0);
  }
  return diag;
}

void write_points_csv(const std::string& path, const GridGeometry& geom,
                      const std::vector<int>& set1, const std::vector<int>& set2) {
  std::ofstream out(path);
  if (!out) fail(Errc::domain, "cannot open " + path + " for writing");
  out << "# set_id,index,x,y  (indices 0-based into the grid ordering)\n";
  for (int idx : set1)
    out << 1 << ',' << idx << ',' << format_real(geom.points[static_cast<std::size_t>(idx)][0])
        << ',' << format_real(geom.points[static_cast<std::size_t>(idx)][1]) << "\n";
  for (int idx : set2)
    out << 2 << ',' << idx << ',' << format_real(geom.points[static_cast<std::size_t>(idx)][0])
        << ',' << format_real(geom.points[static_cast<std::size_t>(idx)][1]) << "\n";
}

namespace {

std::string svg_coord(Real unit, Real size, Real margin) {
  return format_real(margin + unit * size);
}

}  // namespace

void write_scatter_svg(const std::string& path, const GridGeometry& geom,
                       const std::vector<int>& set1, const std::vector<int>& set2) {
  std::ofstream out(path);
  if (!out) fail(Errc::domain, "cannot open " + path + " for writing");
  const Real size = 560.0, margin = 20.0, total = size + 2 * margin;

  std::set<int> both;
  {
    std::set<int> s1(set1.begin(), set1.end());
    for (int idx : set2)
      if (s1.count(idx)) both.insert(idx);
  }

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total << "\" height=\"" << total
      << "\" viewBox=\"0 0 " << total << " " << total << "\">\n";
  out << "  <rect width=\"" << total << "\" height=\"" << total
      << "\" fill=\"white\" stroke=\"#444\"/>\n";
  auto emit = [&](int idx, const char* cls, const char* color, Real r) {
    const auto& p = geom.points[static_cast<std::size_t>(idx)];
    // y axis flipped so (0,0) sits bottom-left
    out << "  <circle class=\"" << cls << "\" cx=\"" << svg_coord(p[0], size, margin) << "\" cy=\""
        << svg_coord(1.0 - p[1], size, margin) << "\" r=\"" << r << "\" fill=\"" << color
        << "\"/>\n";
  };
  for (int idx : set1)
    if (!both.count(idx)) emit(idx, "s1", "#1f77b4", 4.0);
  for (int idx : set2)
    if (!both.count(idx)) emit(idx, "s2", "#ff7f0e", 4.0);
  for (int idx : both) emit(idx, "both", "#d62728", 5.0);
  out << "</svg>\n";
}

void write_conditional_map_csv(const std::string& path, const GridGeometry& geom,
                               const Vector& probabilities) {
  if (static_cast<std::size_t>(probabilities.size()) != geom.points.size())
    fail(Errc::dim_mismatch, "probability vector does not match grid size");
  std::ofstream out(path);
  if (!out) fail(Errc::domain, "cannot open " + path + " for writing");
  out << "# index,x,y,probability  (indices 0-based into the grid ordering)\n";
  for (Index i = 0; i < probabilities.size(); ++i) {
    const auto& p = geom.points[static_cast<std::size_t>(i)];
    out << i << ',' << format_real(p[0]) << ',' << format_real(p[1]) << ','
        << format_real(probabilities(i)) << "\n";
  }
}

SimulationResult run_coupled_simulation(const SimulationConfig& config) {
  if (config.num_samples < 1) fail(Errc::domain, "simulation needs at least one sample");
  if (config.out_prefix.empty()) fail(Errc::domain, "simulation needs an output prefix");

  const GridGeometry geom = make_grid(config.grid_k);
  const Kernel k = grid_kernel(geom, config.kernel);
  const CouplingSpec spec = random_attractive_spec(k, config.seed, config.mu_scale);
  const CouplingKernel coupling = attractive_coupling(spec);

  const Index n = k.size();
  SimulationResult result;
  for (Index i = 0; i < n; ++i)
    result.diag_cross_covariance_sum += cross_covariance(coupling, i, i);

  const Kernel full = coupling.as_kernel();
  std::vector<SubsetSample> samples =
      sample_batch_sequential(full, config.num_samples, config.seed);
  for (int idx : samples.front().members) {
    if (idx < n)
      result.set1.push_back(idx);
    else
      result.set2.push_back(idx - static_cast<int>(n));
  }

  result.points_csv = config.out_prefix + "_points.csv";
  result.coupling_mtxt = config.out_prefix + "_coupling.mtxt";
  result.scatter_svg = config.out_prefix + "_scatter.svg";
  write_points_csv(result.points_csv, geom, result.set1, result.set2);
  write_mtxt(result.coupling_mtxt, coupling.full);
  write_scatter_svg(result.scatter_svg, geom, result.set1, result.set2);
  return result;
}

}  // namespace nsdpp
