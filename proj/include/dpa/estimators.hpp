#pragma once

// Empirical estimates of the ratio and angular laws from three sources
// (simulated graphs, the recursion grid, and the mixture sampler), plus the
// Kolmogorov-Smirnov distance used to compare them with theory.
//
// All histograms are of arctan(O / I^a) on [0, pi/2] with uniform bins.
// Quantiles follow the nearest-rank convention: the smallest value v with
// cumulative weight >= q * total.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dpa/densities.hpp"
#include "dpa/errors.hpp"
#include "dpa/graph.hpp"
#include "dpa/params.hpp"
#include "dpa/recursion.hpp"
#include "dpa/sampler.hpp"

namespace dpa {

inline constexpr std::size_t kDefaultBins = 64;

enum class Conditioning { in_degree, radius };

struct ConditionalHistogram {
  std::vector<double> bin_edges;
  std::vector<double> masses;
  std::uint64_t n_exceedances = 0;
  double threshold = 0.0;
  Conditioning conditioning = Conditioning::in_degree;
};

/// One (in, out) location carrying a weight: a node count, a probability, ...
struct WeightedPoint {
  std::uint64_t i = 0;
  std::uint64_t j = 0;
  double weight = 0.0;
  std::uint64_t units = 1;  // nodes or draws represented; 1 per grid cell
};

inline std::vector<WeightedPoint> points_from_counts(const JointCounts& counts) {
  std::vector<WeightedPoint> pts;
  pts.reserve(counts.size());
  for (const auto& [ij, n] : counts) pts.push_back({ij.first, ij.second, static_cast<double>(n), n});
  return pts;
}

inline std::vector<WeightedPoint> points_from_grid(const DegreeGrid& g) {
  std::vector<WeightedPoint> pts;
  for (std::size_t i = 0; i <= g.imax; ++i) {
    for (std::size_t j = 0; j <= g.jmax; ++j) {
      if (g.at(i, j) > 0.0) pts.push_back({i, j, g.at(i, j), 1});
    }
  }
  return pts;
}

inline JointCounts counts_from_samples(std::span<const DegreeSample> samples) {
  JointCounts c;
  for (const auto& s : samples) ++c[{s.i, s.o}];
  return c;
}

/// Empirical q-quantile, nearest rank: the ceil(q n)-th smallest value.
inline double threshold_quantile(std::span<const double> values, double q) {
  if (values.empty()) throw DomainError("quantile of an empty sample");
  if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  std::vector<double> v(values.begin(), values.end());
  const auto n = static_cast<double>(v.size());
  // guard q * n against round-off just above an integer
  const double r = std::ceil(q * n - 1e-9 * std::max(1.0, q * n));
  const auto rank = static_cast<std::size_t>(std::clamp(r, 1.0, n));
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(rank - 1), v.end());
  return v[rank - 1];
}

/// Weighted nearest-rank quantile of `stat(point)`: the smallest value whose
/// cumulative weight reaches q * total_weight. With integer counts and
/// total_weight = their sum this equals threshold_quantile on the expanded
/// sample. For a truncated probability grid pass total_weight = 1: the missing
/// mass is treated as lying above every grid value.
template <class Stat>
double weighted_quantile(std::span<const WeightedPoint> pts, Stat stat, double q, double total_weight) {
  if (pts.empty()) throw DomainError("quantile of an empty sample");
  if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  std::vector<std::pair<double, double>> sv;
  sv.reserve(pts.size());
  for (const auto& p : pts) sv.emplace_back(stat(p), p.weight);
  std::sort(sv.begin(), sv.end());
  const double target = q * total_weight;
  const double slack = 1e-12 * total_weight;
  double cum = 0.0;
  for (const auto& [v, w] : sv) {
    cum += w;
    if (cum >= target - slack) return v;
  }
  throw DomainError("weights sum to less than the requested quantile level");
}

inline double total_weight(std::span<const WeightedPoint> pts) {
  double w = 0.0;
  for (const auto& p : pts) w += p.weight;
  return w;
}

/// arctan(O / I^a); 0 when O = 0, pi/2 when I = 0 < O.
inline double ratio_angle(std::uint64_t i, std::uint64_t j, double a) {
  return std::atan2(static_cast<double>(j), std::pow(static_cast<double>(i), a));
}

inline double radius_squared(std::uint64_t i, std::uint64_t j, double a) {
  const auto dj = static_cast<double>(j);
  return dj * dj + std::pow(static_cast<double>(i), 2.0 * a);
}

inline std::vector<double> uniform_angle_edges(std::size_t bins) {
  std::vector<double> e(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) e[k] = std::numbers::pi / 2 * static_cast<double>(k) / static_cast<double>(bins);
  e[bins] = std::numbers::pi / 2;
  return e;
}

/// Histogram of arctan(O / I^a) over the points accepted by `keep`.
template <class Keep>
ConditionalHistogram angle_histogram(std::span<const WeightedPoint> pts, double a, std::size_t bins, Keep keep,
                                     Conditioning cond, double threshold) {
  if (bins == 0) throw DomainError("histogram needs at least one bin");
  ConditionalHistogram h;
  h.bin_edges = uniform_angle_edges(bins);
  h.masses.assign(bins, 0.0);
  h.conditioning = cond;
  h.threshold = threshold;
  double w = 0.0;
  for (const auto& p : pts) {
    if (!(p.weight > 0.0) || !keep(p)) continue;
    const double t = ratio_angle(p.i, p.j, a);
    auto b = static_cast<std::size_t>(t / (std::numbers::pi / 2) * static_cast<double>(bins));
    b = std::min(b, bins - 1);
    h.masses[b] += p.weight;
    w += p.weight;
    h.n_exceedances += p.units;
  }
  if (!(w > 0.0)) throw DomainError("no mass in the conditioning set");
  for (double& m : h.masses) m /= w;
  return h;
}

/// Histogram of arctan(O / I^a) over points with I > m.
inline ConditionalHistogram ratio_histogram(std::span<const WeightedPoint> pts, double a, double m,
                                            std::size_t bins = kDefaultBins) {
  return angle_histogram(
      pts, a, bins, [m](const WeightedPoint& p) { return static_cast<double>(p.i) > m; }, Conditioning::in_degree,
      m);
}

/// Histogram of arctan(O / I^a) over points with m < O^2 + I^(2a) <= cap.
inline ConditionalHistogram angular_histogram(std::span<const WeightedPoint> pts, double a, double m,
                                              std::size_t bins = kDefaultBins,
                                              double cap = std::numeric_limits<double>::infinity()) {
  return angle_histogram(
      pts, a, bins,
      [a, m, cap](const WeightedPoint& p) {
        const double r2 = radius_squared(p.i, p.j, a);
        return r2 > m && r2 <= cap;
      },
      Conditioning::radius, m);
}

/// Strategy 1 for the ratio: nodes of a simulated graph whose in-degree
/// exceeds the q-quantile of all in-degrees.
inline ConditionalHistogram ratio_histogram_sim(const JointCounts& counts, const ModelParams& p, double q,
                                                std::size_t bins = kDefaultBins) {
  const auto pts = points_from_counts(counts);
  const double m = weighted_quantile(
      std::span<const WeightedPoint>(pts), [](const WeightedPoint& w) { return static_cast<double>(w.i); }, q,
      total_weight(pts));
  return ratio_histogram(pts, derive(p).a, m, bins);
}

/// q-quantile of the in-degree marginal of a recursion grid.
inline double recursion_in_quantile(const DegreeGrid& g, double q) {
  const auto marg = marginal(g, Axis::in);
  double cum = 0.0;
  for (std::size_t i = 0; i < marg.size(); ++i) {
    cum += marg[i];
    if (cum >= q) return static_cast<double>(i);
  }
  throw DomainError("recursion grid captures less than the requested in-degree quantile; enlarge imax");
}

/// Strategy 2 for the ratio: grid cells with i > m weighted by p_ij.
inline ConditionalHistogram ratio_density_recursion(const DegreeGrid& g, const ModelParams& p, double m,
                                                    std::size_t bins = kDefaultBins) {
  if (!(m < static_cast<double>(g.imax))) throw DomainError("threshold m must be below imax");
  const auto pts = points_from_grid(g);
  return ratio_histogram(pts, derive(p).a, m, bins);
}

/// Angular estimate from a simulated graph or sampler counts: units with
/// O^2 + I^(2a) above its q-quantile.
inline ConditionalHistogram angular_histogram_counts(const JointCounts& counts, const ModelParams& p, double q,
                                                     std::size_t bins = kDefaultBins) {
  const double a = derive(p).a;
  const auto pts = points_from_counts(counts);
  const double m = weighted_quantile(
      std::span<const WeightedPoint>(pts), [a](const WeightedPoint& w) { return radius_squared(w.i, w.j, a); }, q,
      total_weight(pts));
  return angular_histogram(pts, a, m, bins);
}

/// Angular estimate from a recursion grid. The grid is a rectangle in the
/// standardized coordinates (I^a, O), so only the band of radii inside its
/// largest inscribed quarter disc, radius min(imax^a, jmax), is used; beyond
/// it some angles would be cut off.
inline ConditionalHistogram angular_histogram_recursion(const DegreeGrid& g, const ModelParams& p, double q,
                                                        std::size_t bins = kDefaultBins) {
  const double a = derive(p).a;
  const auto pts = points_from_grid(g);
  const double m = weighted_quantile(
      std::span<const WeightedPoint>(pts), [a](const WeightedPoint& w) { return radius_squared(w.i, w.j, a); }, q,
      1.0);
  const double rmax = std::min(std::pow(static_cast<double>(g.imax), a), static_cast<double>(g.jmax));
  if (!(m < rmax * rmax)) throw DomainError("radius quantile lies outside the grid's inscribed disc; enlarge the grid");
  return angular_histogram(pts, a, m, bins, rmax * rmax);
}

/// Grid extents (imax, jmax) with about `cells` cells whose inscribed quarter
/// disc in (I^a, O) coordinates is as large as possible: imax^a ~ jmax.
inline std::pair<std::size_t, std::size_t> angular_grid_shape(double a, double cells = 8e6) {
  if (!(a > 0.0) || !(cells >= 9.0)) throw DomainError("angular grid shape needs a > 0 and cells >= 9");
  const double imax = std::pow(cells, 1.0 / (1.0 + a));
  const double jmax = std::pow(imax, a);
  return {static_cast<std::size_t>(std::max(2.0, std::ceil(imax))), static_cast<std::size_t>(std::max(2.0, std::ceil(jmax)))};
}

/// Theoretical CDF values at histogram bin edges.
struct TheoreticalCdf {
  std::vector<double> edges;
  std::vector<double> cdf;
};

/// CDF of arctan(R) at the given edges (edges within [0, pi/2]).
inline TheoreticalCdf ratio_arctan_cdf(const ModelParams& p, const std::vector<double>& edges) {
  const RatioDensity f(p);
  TheoreticalCdf t{edges, std::vector<double>(edges.size(), 0.0)};
  auto dens = [&f](double u) { return f.arctan_density(u); };
  double acc = 0.0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (k > 0) acc += integrate_on_interval(dens, edges[k - 1], edges[k], 1e-9, 1e-13).value;
    t.cdf[k] = edges[k] <= 0.0 ? 0.0 : acc;
  }
  return t;
}

/// CDF of the angular law at the given edges.
inline TheoreticalCdf angular_cdf(const ModelParams& p, const std::vector<double>& edges) {
  const AngularDensity f(p);
  TheoreticalCdf t{edges, std::vector<double>(edges.size(), 0.0)};
  double acc = 0.0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (k > 0) acc += integrate_on_interval(f, edges[k - 1], edges[k], 1e-9, 1e-13).value;
    t.cdf[k] = acc;
  }
  return t;
}

inline TheoreticalCdf theoretical_cdf(const ModelParams& p, Conditioning c, const std::vector<double>& edges) {
  return c == Conditioning::in_degree ? ratio_arctan_cdf(p, edges) : angular_cdf(p, edges);
}

/// sup over bin edges of |empirical CDF - theoretical CDF|.
inline double ks_distance(const ConditionalHistogram& h, const TheoreticalCdf& t) {
  if (t.edges.size() != h.bin_edges.size()) throw DomainError("KS distance: support mismatch (edge counts differ)");
  for (std::size_t k = 0; k < t.edges.size(); ++k) {
    if (std::abs(t.edges[k] - h.bin_edges[k]) > 1e-12 * std::max(1.0, std::abs(t.edges[k]))) {
      throw DomainError("KS distance: support mismatch at edge " + std::to_string(k));
    }
  }
  double emp = 0.0;
  double worst = std::abs(t.cdf[0]);
  for (std::size_t k = 0; k < h.masses.size(); ++k) {
    emp += h.masses[k];
    worst = std::max(worst, std::abs(emp - t.cdf[k + 1]));
  }
  return worst;
}

/// KS distance between two histograms on the same bins.
inline double ks_distance(const ConditionalHistogram& h1, const ConditionalHistogram& h2) {
  if (h1.bin_edges != h2.bin_edges) throw DomainError("KS distance: histograms have different bins");
  TheoreticalCdf t{h2.bin_edges, std::vector<double>(h2.bin_edges.size(), 0.0)};
  for (std::size_t k = 0; k < h2.masses.size(); ++k) t.cdf[k + 1] = t.cdf[k] + h2.masses[k];
  return ks_distance(h1, t);
}

}  // namespace dpa
