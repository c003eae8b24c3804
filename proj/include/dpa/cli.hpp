#pragma once

// Command-line front end. Subcommands: simulate, recurse, gf, density,
// sample-limit, compare. Flags given on the command line override the
// matching config entries.
//
// Exit codes: 0 success, 2 bad configuration or arguments, 3 numerical or
// domain failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpa/config.hpp"
#include "dpa/csv.hpp"
#include "dpa/densities.hpp"
#include "dpa/estimators.hpp"
#include "dpa/generating_function.hpp"
#include "dpa/graph.hpp"
#include "dpa/recursion.hpp"
#include "dpa/sampler.hpp"

namespace dpa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  // simulate
  std::optional<std::uint64_t> edges;
  std::optional<std::string> edge_list;
  // recurse
  std::optional<std::size_t> imax, jmax;
  std::optional<std::string> marginal;
  // gf
  double x = 0.5, y = 0.5;
  // density
  std::optional<std::string> density_kind;
  std::optional<std::size_t> points;
  // sample-limit
  std::optional<std::uint64_t> n;
  // compare
  std::optional<std::string> strategy, compare_kind;
  std::optional<double> quantile;
  std::optional<std::size_t> bins;
};

namespace detail {

inline std::string out_path(const RunConfig& cfg, const char* fallback) {
  return cfg.out.empty() ? std::string(fallback) : cfg.out;
}

inline void emit(const CsvWriter& w, const std::string& path, std::ostream& os) {
  w.save(path);
  os << w.summary(path) << '\n';
}

inline void apply(const Overrides& o, RunConfig& cfg) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.out = *o.out;
  if (o.edges) cfg.simulate.edges = *o.edges;
  if (o.edge_list) cfg.simulate.edge_list = *o.edge_list;
  if (o.imax) cfg.recurse.imax = *o.imax;
  if (o.jmax) cfg.recurse.jmax = *o.jmax;
  if (o.marginal) cfg.recurse.marginal = *o.marginal;
  if (o.density_kind) cfg.density.kind = dpa::detail::parse_density_kind(*o.density_kind);
  if (o.points) cfg.density.points = *o.points;
  if (o.n) cfg.sample.n = *o.n, cfg.compare.n = *o.n;
  if (o.strategy) cfg.compare.strategy = *o.strategy;
  if (o.compare_kind) cfg.compare.kind = *o.compare_kind;
  if (o.quantile) cfg.compare.quantile = *o.quantile;
  if (o.bins) cfg.compare.bins = *o.bins;
  if (cfg.recurse.imax < 3 || cfg.recurse.jmax < 3) throw ConfigError("--imax and --jmax must be at least 3");
  if (cfg.density.points < 2) throw ConfigError("--points must be at least 2");
  if (!(cfg.compare.quantile > 0.0 && cfg.compare.quantile < 1.0)) throw ConfigError("--quantile must lie in (0, 1)");
  if (cfg.compare.bins == 0) throw ConfigError("--bins must be positive");
  if (cfg.sample.n == 0) throw ConfigError("--n must be positive");
}

inline void run_simulate(const RunConfig& cfg, std::ostream& os) {
  SimConfig sc;
  sc.target_edges = cfg.simulate.edges;
  sc.seed = cfg.seed;
  sc.initial = cfg.simulate.initial;
  const DirectedGraph g = grow(cfg.params, sc);
  CsvWriter w({"in_degree", "out_degree", "count"});
  for (const auto& [ij, n] : joint_degree_counts(g)) w.row(ij.first, ij.second, n);
  emit(w, out_path(cfg, "degrees.csv"), os);
  if (!cfg.simulate.edge_list.empty()) {
    std::string text;
    text.reserve(g.n_edges() * 16);
    for (std::uint64_t e = 0; e < g.n_edges(); ++e) {
      text += std::to_string(g.edge_sources[e]);
      text += '\t';
      text += std::to_string(g.edge_targets[e]);
      text += '\n';
    }
    std::ofstream f(cfg.simulate.edge_list, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file \"" + cfg.simulate.edge_list + "\"");
    f << text;
    os << "wrote " << cfg.simulate.edge_list << ": " << g.n_edges() << " rows, fnv1a64 " << hex64(fnv1a64(text))
       << '\n';
  }
}

inline void run_recurse(const RunConfig& cfg, std::ostream& os) {
  const auto& r = cfg.recurse;
  if (r.marginal.empty()) {
    const DegreeGrid g = solve_grid(cfg.params, r.imax - 1, r.jmax - 1, r.order);
    CsvWriter w({"i", "j", "p"});
    for (std::size_t i = 0; i <= g.imax; ++i) {
      for (std::size_t j = 0; j <= g.jmax; ++j) w.row(i, j, g.at(i, j));
    }
    emit(w, out_path(cfg, "pij.csv"), os);
    os << "captured_mass " << g.captured_mass << '\n';
    return;
  }
  const bool in = r.marginal == "in";
  const std::size_t k = in ? r.imax : r.jmax;
  const auto m = exact_marginal(cfg.params, in ? Axis::in : Axis::out, k - 1);
  CsvWriter w({"k", "p_k"});
  for (std::size_t i = 0; i < m.size(); ++i) w.row(i, m[i]);
  emit(w, out_path(cfg, "marginal.csv"), os);
}

inline void run_gf(const RunConfig& cfg, double x, double y, std::ostream& os) {
  const double v = phi(cfg.params, x, y);
  os.precision(17);
  os << "phi " << v << '\n';
  constexpr double h = 1e-4;
  if (x - h > 0.0 && x + h < 1.0 && y - h > 0.0 && y + h < 1.0) {
    os << "pde_residual " << pde_residual(cfg.params, x, y, h) << '\n';
  } else {
    os << "pde_residual n/a (boundary point)\n";
  }
}

inline void run_density(const RunConfig& cfg, std::ostream& os) {
  const auto& d = cfg.density;
  auto [lo, hi] = default_range(cfg.params, d.kind);
  if (d.lo) lo = *d.lo;
  if (d.hi) hi = *d.hi;
  const DensityCurve c = curve(cfg.params, d.kind, d.points, lo, hi);
  CsvWriter w({"abscissa", "density"});
  for (std::size_t k = 0; k < c.abscissae.size(); ++k) w.row(c.abscissae[k], c.values[k]);
  emit(w, out_path(cfg, "curve.csv"), os);
}

inline void run_sample(const RunConfig& cfg, std::ostream& os) {
  const LimitSampler sampler(cfg.params);
  Rng rng(cfg.seed);
  CsvWriter w({"i", "o", "branch", "z"});
  for (std::uint64_t k = 0; k < cfg.sample.n; ++k) {
    const DegreeSample s = sampler(rng);
    w.row(s.i, s.o, s.branch, s.z);
  }
  emit(w, out_path(cfg, "samples.csv"), os);
}

inline void run_compare(const RunConfig& cfg, std::ostream& os) {
  const auto& c = cfg.compare;
  const ModelParams& p = cfg.params;
  const bool angular = c.kind == "angular";
  const double a = derive(p).a;
  ConditionalHistogram h;
  if (c.strategy == "recurse") {
    if (angular) {
      auto [imax, jmax] = angular_grid_shape(a);
      if (c.imax) imax = c.imax;
      if (c.jmax) jmax = c.jmax;
      h = angular_histogram_recursion(solve_grid(p, imax, jmax), p, c.quantile, c.bins);
    } else {
      const DegreeGrid g = solve_grid(p, c.imax ? c.imax : 2000, c.jmax ? c.jmax : 2000);
      h = ratio_density_recursion(g, p, recursion_in_quantile(g, c.quantile), c.bins);
    }
  } else {
    JointCounts counts;
    if (c.strategy == "sim") {
      SimConfig sc;
      const double nodes_per_edge = p.alpha + p.gamma;
      sc.target_edges = c.edges ? c.edges : static_cast<std::uint64_t>(std::llround(1e6 / nodes_per_edge));
      sc.seed = cfg.seed;
      sc.initial = cfg.simulate.initial;
      counts = joint_degree_counts(grow(p, sc));
    } else {
      const LimitSampler sampler(p);
      Rng rng(cfg.seed);
      for (std::uint64_t k = 0; k < c.n; ++k) {
        const DegreeSample s = sampler(rng);
        ++counts[{s.i, s.o}];
      }
    }
    h = angular ? angular_histogram_counts(counts, p, c.quantile, c.bins)
                : ratio_histogram_sim(counts, p, c.quantile, c.bins);
  }
  const TheoreticalCdf t = theoretical_cdf(p, h.conditioning, h.bin_edges);
  CsvWriter w({"bin_lo", "bin_hi", "mass", "theoretical_mass"});
  for (std::size_t k = 0; k < h.masses.size(); ++k) {
    w.row(h.bin_edges[k], h.bin_edges[k + 1], h.masses[k], t.cdf[k + 1] - t.cdf[k]);
  }
  emit(w, out_path(cfg, "hist.csv"), os);
  os << "threshold " << h.threshold << ", exceedances " << h.n_exceedances << ", ks " << ks_distance(h, t) << '\n';
}

}  // namespace detail

/// Parses arguments and runs one subcommand; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& os = std::cout, std::ostream& es = std::cerr) {
  CLI::App app{"Directed preferential attachment: simulation, limit law, and tail densities", "dpa"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config_path, "JSON run configuration")->required();
  app.add_option("--seed", o.seed, "RNG seed");
  app.add_option("--out", o.out, "output CSV path");

  auto* sim = app.add_subcommand("simulate", "grow a graph and write joint degree counts");
  sim->add_option("--edges", o.edges, "number of edges to grow to");
  sim->add_option("--edge-list", o.edge_list, "also write the edge list (TSV)");

  auto* rec = app.add_subcommand("recurse", "solve the limit-probability recursion");
  rec->add_option("--imax", o.imax, "grid rows (i = 0..imax-1)");
  rec->add_option("--jmax", o.jmax, "grid columns (j = 0..jmax-1)");
  rec->add_option("--marginal", o.marginal, "emit a marginal instead")->check(CLI::IsMember({"in", "out"}));

  auto* gf = app.add_subcommand("gf", "evaluate the generating function and PDE residual");
  gf->add_option("--x", o.x, "x in [0, 1]")->check(CLI::Range(0.0, 1.0));
  gf->add_option("--y", o.y, "y in [0, 1]")->check(CLI::Range(0.0, 1.0));

  auto* den = app.add_subcommand("density", "sample a limit density on a uniform grid");
  den->add_option("--kind", o.density_kind)->check(CLI::IsMember({"ratio", "ratio_arctan", "angular", "slice"}));
  den->add_option("--points", o.points, "number of abscissae");

  auto* smp = app.add_subcommand("sample-limit", "draw from the limiting joint degree law");
  smp->add_option("--n", o.n, "number of draws");

  auto* cmp = app.add_subcommand("compare", "empirical histogram against the theoretical law");
  cmp->add_option("--strategy", o.strategy)->check(CLI::IsMember({"sim", "recurse", "sampler"}));
  cmp->add_option("--kind", o.compare_kind)->check(CLI::IsMember({"ratio", "angular"}));
  cmp->add_option("--quantile", o.quantile, "threshold quantile level");
  cmp->add_option("--bins", o.bins, "histogram bins");
  cmp->add_option("--n", o.n, "draws for the sampler strategy");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    os << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    es << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    RunConfig cfg = parse_config(o.config_path);
    detail::apply(o, cfg);
    for (const auto& w : cfg.warnings) es << "warning: " << w << '\n';
    if (*sim) detail::run_simulate(cfg, os);
    else if (*rec) detail::run_recurse(cfg, os);
    else if (*gf) detail::run_gf(cfg, o.x, o.y, os);
    else if (*den) detail::run_density(cfg, os);
    else if (*smp) detail::run_sample(cfg, os);
    else if (*cmp) detail::run_compare(cfg, os);
  } catch (const ConfigError& e) {
    es << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParameterError& e) {
    es << "parameter error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    es << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace dpa::cli
