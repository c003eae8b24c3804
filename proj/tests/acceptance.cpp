// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dpa/dpa.hpp"

using namespace dpa;

namespace {

const ModelParams P0{0.5, 0.5, 0.0, 1.0, 1.0};
const ModelParams P1{0.3, 0.5, 0.2, 1.0, 1.0};

int failures = 0;

void report(int id, bool ok, const std::string& what, double seconds) {
  std::printf("criterion %2d %s: %s [%.1fs]\n", id, ok ? "PASS" : "FAIL", what.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

template <class F>
void criterion(int id, F body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string what;
  bool ok = false;
  try {
    ok = body(what);
  } catch (const std::exception& e) {
    what += std::string(" exception: ") + e.what();
  }
  report(id, ok, what, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

// sum p_ij x^i y^j over the grid
double grid_gf(const DegreeGrid& g, double x, double y) {
  std::vector<double> yp(g.jmax + 1);
  for (std::size_t j = 0; j <= g.jmax; ++j) yp[j] = std::pow(y, static_cast<double>(j));
  double s = 0.0, xi = 1.0;
  for (std::size_t i = 0; i <= g.imax; ++i, xi *= x) {
    double row = 0.0;
    for (std::size_t j = 0; j <= g.jmax; ++j) row += g.at(i, j) * yp[j];
    s += xi * row;
  }
  return s;
}

}  // namespace

int main() {
  const DegreeGrid g0 = solve_grid(P0, 2000, 2000);
  const DegreeGrid g1 = solve_grid(P1, 2000, 2000);

  criterion(1, [&](std::string& w) {
    const double e0 = std::abs(g0.at(0, 1) - 3.0 / 7);
    const double e1 = std::abs(g1.at(0, 1) - 9.0 / 37);
    const double e2 = std::abs(g1.at(1, 0) - 3.0 / 19);
    w = fmt("base cells: |P0 p01 - 3/7| = %.1e, |P1 p01 - 9/37| = %.1e, |P1 p10 - 3/19| = %.1e (tol 1e-12)", e0, e1,
            e2);
    return e0 <= 1e-12 && e1 <= 1e-12 && e2 <= 1e-12;
  });

  criterion(2, [&](std::string& w) {
    bool nonneg = true;
    for (double v : g0.values) nonneg = nonneg && v >= 0.0;
    w = fmt("P0 2000x2000 captured mass %.8f (>= 0.99), all cells nonnegative: %s", g0.captured_mass,
            nonneg ? "yes" : "no");
    return nonneg && g0.captured_mass >= 0.99;
  });

  criterion(3, [&](std::string& w) {
    const auto in = marginal(g0, Axis::in);
    const double s_in = tail_index_fit(in, 100, 1000);
    // out-degree 400 sits at in-degrees ~ 400^2, so sweep i far beyond the square grid
    const auto out = streaming_marginal(P0, Axis::out, 400, 200000);
    const double s_out = tail_index_fit(out, 50, 400);
    const bool ok_in = std::abs(s_in + 2.5) <= 0.05 * 2.5;
    const bool ok_out = std::abs(s_out + 4.0) <= 0.07 * 4.0;
    w = fmt("P0 in-slope [100,1000] %.4f (-2.5 +- 5%%), out-slope [50,400] %.4f (-4 +- 7%%)", s_in, s_out);
    return ok_in && ok_out;
  });

  criterion(4, [&](std::string& w) {
    bool ok = true;
    w = "";
    for (const auto* pg : {&g0, &g1}) {
      const ModelParams& p = pg->params;
      double worst = 0.0;
      for (int a = 1; a <= 9; ++a) {
        for (int b = 1; b <= 9; ++b) {
          const double x = a / 10.0, y = b / 10.0;
          worst = std::max(worst, std::abs(phi(p, x, y) - grid_gf(*pg, x, y)));
        }
      }
      const double tol = 1e-3 + (1.0 - pg->captured_mass);
      const double norm = std::abs(phi(p, 1.0, 1.0) - 1.0);
      ok = ok && worst <= tol && norm <= 1e-9;
      w += fmt("%s max |phi - grid sum| %.2e (tol %.2e), |phi(1,1) - 1| %.1e; ", pg == &g0 ? "P0" : "P1", worst, tol,
               norm);
    }
    return ok;
  });

  criterion(5, [&](std::string& w) {
    double worst[2] = {0.0, 0.0};
    int k = 0;
    for (const ModelParams& p : {P0, P1}) {
      for (int a = 1; a <= 9; ++a) {
        for (int b = 1; b <= 9; ++b) worst[k] = std::max(worst[k], std::abs(pde_residual(p, a / 10.0, b / 10.0, 1e-4)));
      }
      ++k;
    }
    w = fmt("max |PDE residual| on 9x9 lattice: P0 %.2e, P1 %.2e (tol 1e-6)", worst[0], worst[1]);
    return worst[0] <= 1e-6 && worst[1] <= 1e-6;
  });

  criterion(6, [&](std::string& w) {
    const int n = 1000000;
    double tv[2];
    int k = 0;
    for (const auto* pg : {&g0, &g1}) {
      std::map<std::pair<std::uint64_t, std::uint64_t>, double> freq;
      for (const auto& s : sample_limit_n(pg->params, n, 2024 + k)) {
        if (s.i <= 5 && s.o <= 5) freq[{s.i, s.o}] += 1.0 / n;
      }
      double d = 0.0;
      for (std::uint64_t i = 0; i <= 5; ++i) {
        for (std::uint64_t j = 0; j <= 5; ++j) d += std::abs(freq[{i, j}] - pg->at(i, j));
      }
      tv[k++] = 0.5 * d;
    }
    w = fmt("TV(sampler, recursion) on {i,j <= 5} at 1e6 draws: P0 %.4f, P1 %.4f (tol 0.01)", tv[0], tv[1]);
    return tv[0] <= 0.01 && tv[1] <= 0.01;
  });

  criterion(7, [&](std::string& w) {
    bool ok = true;
    w = "";
    for (const ModelParams& p : {P0, P1}) {
      const double n = 1e5;
      const DirectedGraph g = grow(p, {100000, 7, InitialGraph::two_cycle()});
      const double ratio = static_cast<double>(g.n_nodes()) / n;
      const double tol = 4.0 * std::sqrt((p.alpha + p.gamma) * p.beta / n);
      ok = ok && std::abs(ratio - (1.0 - p.beta)) <= tol;
      w += fmt("N(n)/n %.5f vs %.2f (tol %.5f); ", ratio, 1.0 - p.beta, tol);
    }
    const DirectedGraph g = grow(P0, {1000000, 8, InitialGraph::two_cycle()});
    const auto counts = joint_degree_counts(g);
    const auto it = counts.find({0, 1});
    const double f01 = it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(g.n_nodes());
    ok = ok && std::abs(f01 - 3.0 / 7) <= 0.02;
    w += fmt("P0 frequency of (0,1) at 1e6 edges %.5f vs 3/7 (tol 0.02)", f01);
    return ok;
  });

  criterion(8, [&](std::string& w) {
    bool ok = true;
    w = "";
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ux(0.05, 5.0), us(0.5, 2.0);
    int idx = 0;
    for (const ModelParams& p : {P0, P1}) {
      const RatioDensity fr(p);
      const double mr = integrate_to_infinity([&](double r) { return r > 0.0 ? fr(r) : 0.0; }, 0.0, 1e-10).value;
      const AngularDensity fa(p);
      const double ma = integrate_on_interval(fa, 0.0, std::numbers::pi / 2, 1e-10).value;
      const TailDensity f(p);
      const double a = f.derived().a, e = f.homogeneity_exponent();
      double worst = 0.0;
      for (int k = 0; k < 50; ++k) {
        const double x = ux(rng), y = ux(rng), s = us(rng);
        const double lhs = f(s * x, std::pow(s, a) * y), rhs = std::pow(s, e) * f(x, y);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
      }
      ok = ok && std::abs(mr - 1.0) <= 1e-6 && std::abs(ma - 1.0) <= 1e-4 && worst <= 1e-6;
      w += fmt("%s: int f_R - 1 = %.1e, int f_Theta - 1 = %.1e, homogeneity rel err %.1e; ", idx++ ? "P1" : "P0",
               mr - 1.0, ma - 1.0, worst);
    }
    return ok;
  });

  criterion(9, [&](std::string& w) {
    const auto edges = uniform_angle_edges(kDefaultBins);
    const auto th = ratio_arctan_cdf(P0, edges);
    // alpha + gamma = 1/2 new nodes per edge: 2e6 edges for 10^6 nodes
    const DirectedGraph g = grow(P0, {2000000, 1, InitialGraph::two_cycle()});
    const auto hs = ratio_histogram_sim(joint_degree_counts(g), P0, 0.9995);
    const double ks_sim = ks_distance(hs, th);
    const auto hr = ratio_density_recursion(g0, P0, recursion_in_quantile(g0, 0.9995));
    const double ks_rec = ks_distance(hr, th);
    w = fmt("P0 arctan-R KS: simulation (%llu nodes, m=%g, %llu exceedances) %.4f, recursion (m=%g) %.4f (tol 0.05)",
            static_cast<unsigned long long>(g.n_nodes()), hs.threshold,
            static_cast<unsigned long long>(hs.n_exceedances), ks_sim, hr.threshold, ks_rec);
    return ks_sim <= 0.05 && ks_rec <= 0.05;
  });

  criterion(10, [&](std::string& w) {
    // Deciding measurement: the exact recursion law on a grid shaped so that
    // its inscribed quarter disc in (I^a, O) holds the radius band. The
    // simulation route is printed alongside for reference.
    bool ok = true;
    w = "";
    int k = 0;
    for (const ModelParams& p : {P0, P1}) {
      const auto [imax, jmax] = angular_grid_shape(derive(p).a);
      const auto hr = angular_histogram_recursion(solve_grid(p, imax, jmax), p, 0.9995);
      const double ks_rec = ks_distance(hr, angular_cdf(p, hr.bin_edges));
      const auto edges = static_cast<std::uint64_t>(std::llround(1e6 / (p.alpha + p.gamma)));
      const DirectedGraph g = grow(p, {edges, 10, InitialGraph::two_cycle()});
      const auto hs = angular_histogram_counts(joint_degree_counts(g), p, 0.9995);
      const double ks_sim = ks_distance(hs, angular_cdf(p, hs.bin_edges));
      ok = ok && ks_rec <= 0.05;
      w += fmt("%s: recursion %zux%zu m=%g KS %.4f, simulation m=%g (%llu exceedances) KS %.4f; ", k++ ? "P1" : "P0",
               imax, jmax, hr.threshold, ks_rec, hs.threshold, static_cast<unsigned long long>(hs.n_exceedances),
               ks_sim);
    }
    w += "tol 0.05";
    return ok;
  });

  criterion(11, [&](std::string& w) {
    Rng rng(11);
    const int n = 1000000;
    bool ok = true;
    w = "";
    const NBParams nb{1.7, 0.35};
    std::vector<double> t(n);
    for (auto& v : t) v = static_cast<double>(sample_nb(nb, rng));
    for (double s : {0.3, 0.6, 0.9}) {
      double m = 0.0, m2 = 0.0;
      for (double v : t) {
        const double e = std::pow(s, v);
        m += e;
        m2 += e * e;
      }
      m /= n;
      const double sd = std::sqrt((m2 / n - m * m) / n);
      const double want = std::pow(s + (1.0 - s) / nb.p, -nb.delta);
      ok = ok && std::abs(m - want) <= 4.0 * sd;
      w += fmt("GF(%.1f) %.5f vs %.5f (%.1f sd); ", s, m, want, std::abs(m - want) / sd);
    }
    const double p = 0.4;
    double m = 0.0, m2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const auto v = static_cast<double>(sample_nb({1.0, p}, rng));
      m += v * (v - 1.0);
      m2 += v * v * (v - 1.0) * (v - 1.0);
    }
    m /= n;
    const double sd = std::sqrt((m2 / n - m * m) / n);
    const double want = 2.0 * (1 - p) * (1 - p) / (p * p);
    ok = ok && std::abs(m - want) <= 4.0 * sd;
    w += fmt("E[T(T-1)] %.5f vs %.5f (%.1f sd)", m, want, std::abs(m - want) / sd);
    return ok;
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
