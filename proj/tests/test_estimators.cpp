#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "dpa/estimators.hpp"
#include "support.hpp"

using namespace dpa;
using dpa::test::P0;
using dpa::test::P1;

namespace {

double mass_sum(const ConditionalHistogram& h) { return std::accumulate(h.masses.begin(), h.masses.end(), 0.0); }

std::size_t in_quantile_exact(const ModelParams& p, double q) {
  const auto m = exact_marginal(p, Axis::in, 10000000);
  double cum = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    cum += m[k];
    if (cum >= q) return k;
  }
  return m.size();
}

}  // namespace

TEST(Quantile, NearestRank) {
  std::vector<double> v(10000);
  std::iota(v.begin(), v.end(), 1.0);
  EXPECT_EQ(threshold_quantile(v, 0.9995), 9995.0);
  EXPECT_EQ(threshold_quantile(std::vector<double>(17, 4.5), 0.3), 4.5);
  EXPECT_EQ(threshold_quantile(std::vector<double>{3, 1, 2}, 0.5), 2.0);
  EXPECT_THROW(threshold_quantile(std::vector<double>{}, 0.5), DomainError);
  EXPECT_THROW(threshold_quantile(v, 1.0), DomainError);
}

TEST(Quantile, WeightedMatchesExpanded) {
  std::mt19937_64 g(51);
  std::uniform_int_distribution<int> ui(0, 30), uc(1, 5);
  for (int rep = 0; rep < 100; ++rep) {
    JointCounts c;
    for (int k = 0; k < 40; ++k) c[{static_cast<std::uint64_t>(ui(g)), 0}] += uc(g);
    std::vector<double> expanded;
    for (const auto& [ij, n] : c) expanded.insert(expanded.end(), n, static_cast<double>(ij.first));
    const auto pts = points_from_counts(c);
    for (double q : {0.1, 0.5, 0.9, 0.99}) {
      const double w = weighted_quantile(
          std::span<const WeightedPoint>(pts), [](const WeightedPoint& p) { return static_cast<double>(p.i); }, q,
          total_weight(pts));
      EXPECT_EQ(w, threshold_quantile(expanded, q));
    }
  }
}

TEST(Histogram, ZeroOutDegreeExceedances) {
  JointCounts c{{{500, 0}, 10}, {{900, 0}, 3}, {{1, 3}, 100}};
  const auto h = ratio_histogram(points_from_counts(c), 0.5, 100.0);
  EXPECT_EQ(h.masses[0], 1.0);
  EXPECT_EQ(h.n_exceedances, 13u);
  EXPECT_EQ(h.conditioning, Conditioning::in_degree);
  EXPECT_THROW(ratio_histogram(points_from_counts(c), 0.5, 1000.0), DomainError);
}

TEST(Histogram, SingleGridCell) {
  DegreeGrid g;
  g.imax = g.jmax = 10;
  g.params = P0;
  g.values.assign(121, 0.0);
  g.values[8 * 11 + 4] = 0.3;  // (i, j) = (8, 4): angle atan(4 / sqrt 8)
  const auto h = ratio_density_recursion(g, P0, 5.0);
  const auto bin = static_cast<std::size_t>(std::atan(4.0 / std::sqrt(8.0)) / (std::numbers::pi / 2) * 64);
  EXPECT_EQ(h.masses[bin], 1.0);
  EXPECT_EQ(mass_sum(h), 1.0);
  EXPECT_THROW(ratio_density_recursion(g, P0, 9.0), DomainError);
  EXPECT_THROW(ratio_density_recursion(g, P0, 10.0), DomainError);
}

TEST(Histogram, SingleAngularExceedance) {
  JointCounts c{{{4, 1}, 50}, {{400, 30}, 1}};
  const auto h = angular_histogram(points_from_counts(c), 0.5, 100.0);
  EXPECT_EQ(h.n_exceedances, 1u);
  EXPECT_EQ(std::count(h.masses.begin(), h.masses.end(), 1.0), 1);
  EXPECT_EQ(h.conditioning, Conditioning::radius);
}

TEST(Histogram, MassesSumToOne) {
  std::mt19937_64 g(52);
  std::uniform_int_distribution<std::uint64_t> ui(0, 500);
  for (int rep = 0; rep < 50; ++rep) {
    JointCounts c;
    for (int k = 0; k < 300; ++k) c[{ui(g), ui(g) / 10}] += 1 + ui(g) % 7;
    const auto pts = points_from_counts(c);
    EXPECT_NEAR(mass_sum(ratio_histogram(pts, 0.5, 200.0, 64)), 1.0, 1e-12);
    EXPECT_NEAR(mass_sum(angular_histogram(pts, 0.7, 50.0, 17)), 1.0, 1e-12);
  }
}

TEST(Ks, HandExamples) {
  ConditionalHistogram h;
  h.bin_edges = uniform_angle_edges(64);
  h.masses.assign(64, 1.0 / 64);
  TheoreticalCdf uniform{h.bin_edges, {}};
  for (double e : h.bin_edges) uniform.cdf.push_back(e / (std::numbers::pi / 2));
  EXPECT_NEAR(ks_distance(h, uniform), 0.0, 1e-15);

  std::fill(h.masses.begin(), h.masses.end(), 0.0);
  h.masses[0] = 1.0;
  EXPECT_NEAR(ks_distance(h, uniform), 1.0 - 1.0 / 64, 1e-15);

  ConditionalHistogram two;
  two.bin_edges = uniform_angle_edges(2);
  two.masses = {0.5, 0.5};
  TheoreticalCdf sq{two.bin_edges, {}};
  for (double e : two.bin_edges) sq.cdf.push_back(std::pow(e / (std::numbers::pi / 2), 2));
  EXPECT_NEAR(ks_distance(two, sq), 0.25, 1e-15);

  EXPECT_THROW(ks_distance(two, uniform), DomainError);
  EXPECT_NEAR(ks_distance(two, two), 0.0, 1e-15);
}

TEST(Estimators, RecursionRatioP0) {
  const DegreeGrid g = solve_grid(P0, 2000, 2000);
  const double m = recursion_in_quantile(g, 0.9995);
  const auto edges = uniform_angle_edges(64);
  const auto th = ratio_arctan_cdf(P0, edges);
  const auto h = ratio_density_recursion(g, P0, m);
  EXPECT_LE(ks_distance(h, th), 0.05);
  const double ks50 = ks_distance(ratio_density_recursion(g, P0, 50), th);
  const double ks100 = ks_distance(ratio_density_recursion(g, P0, 100), th);
  const double ks200 = ks_distance(ratio_density_recursion(g, P0, 200), th);
  EXPECT_LT(ks100, ks50);
  EXPECT_LT(ks200, ks100);
}

TEST(Estimators, StrategiesAgreeP0) {
  const auto counts = joint_degree_counts(grow(P0, {2000000, 17, InitialGraph::two_cycle()}));
  const auto sim = ratio_histogram_sim(counts, P0, 0.9995);
  const DegreeGrid g = solve_grid(P0, 2000, 2000);
  const auto rec = ratio_density_recursion(g, P0, recursion_in_quantile(g, 0.9995));
  EXPECT_LE(ks_distance(sim, rec), 0.07);
}

TEST(Estimators, SimBothConditioningsP1) {
  // radius conditioning admits small I, so each histogram is checked against its own law
  const auto counts = joint_degree_counts(grow(P1, {2000000, 18, InitialGraph::two_cycle()}));
  const auto hr = ratio_histogram_sim(counts, P1, 0.9995);
  const auto ha = angular_histogram_counts(counts, P1, 0.9995);
  EXPECT_LE(ks_distance(hr, ratio_arctan_cdf(P1, hr.bin_edges)), 0.05);
  EXPECT_LE(ks_distance(ha, angular_cdf(P1, ha.bin_edges)), 0.05);
}

TEST(Estimators, SamplerRatioConditioned) {
  // 10^5 draws with I > m, m the exact 99.9% in-degree quantile
  const std::size_t m = in_quantile_exact(P0, 0.999);
  const LimitSampler s(P0);
  Rng rng(61);
  JointCounts c;
  for (int n = 0; n < 100000;) {
    const DegreeSample d = s(rng);
    if (d.i > m) ++c[{d.i, d.o}], ++n;
  }
  const auto h = ratio_histogram(points_from_counts(c), derive(P0).a, static_cast<double>(m));
  EXPECT_EQ(h.n_exceedances, 100000u);
  EXPECT_LE(ks_distance(h, ratio_arctan_cdf(P0, h.bin_edges)), 0.03);
}

TEST(Estimators, SamplerAngularP1) {
  const auto samples = sample_limit_n(P1, 10200000, 62);
  const auto h = angular_histogram_counts(counts_from_samples(samples), P1, 0.99);
  EXPECT_GE(h.n_exceedances, 100000u);
  EXPECT_LE(ks_distance(h, angular_cdf(P1, h.bin_edges)), 0.05);
}

TEST(Estimators, SamplerConvergesInSampleSize) {
  // Against the exact conditional law at the same threshold, so that only the
  // sampling error changes between 10^3 and 10^5 exceedances.
  const std::size_t m = in_quantile_exact(P1, 0.95);
  const double a = derive(P1).a;
  const auto exact = ratio_density_recursion(solve_grid(P1, 3000, 3000), P1, static_cast<double>(m));
  const LimitSampler s(P1);
  int wins = 0;
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    Rng rng(stream_seed(63, rep));
    JointCounts c;
    double ks_small = 0.0;
    for (int n = 0; n < 100000;) {
      const DegreeSample d = s(rng);
      if (d.i <= m) continue;
      ++c[{d.i, d.o}];
      if (++n == 1000) ks_small = ks_distance(ratio_histogram(points_from_counts(c), a, m), exact);
    }
    wins += ks_distance(ratio_histogram(points_from_counts(c), a, m), exact) <= ks_small;
  }
  EXPECT_GE(wins, 9);
}

TEST(Estimators, AngularGridShape) {
  const auto [i0, j0] = angular_grid_shape(0.5);
  EXPECT_NEAR(std::sqrt(static_cast<double>(i0)), static_cast<double>(j0), 2.0);
  EXPECT_NEAR(static_cast<double>(i0) * static_cast<double>(j0), 8e6, 1e5);
  const auto [i1, j1] = angular_grid_shape(1.0, 1e6);
  EXPECT_EQ(i1, j1);
  // square grid too small for the radius quantile of a heavy out-tail
  EXPECT_THROW(angular_histogram_recursion(solve_grid(P0, 100, 100), P0, 0.9995), DomainError);
}

TEST(Estimators, RecursionAngularP1) {
  const auto [imax, jmax] = angular_grid_shape(derive(P1).a);
  const auto h = angular_histogram_recursion(solve_grid(P1, imax, jmax), P1, 0.9995);
  EXPECT_LE(ks_distance(h, angular_cdf(P1, h.bin_edges)), 0.05);
}
