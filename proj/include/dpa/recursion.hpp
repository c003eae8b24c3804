#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dpa/errors.hpp"
#include "dpa/params.hpp"

namespace dpa {

/// Limiting joint probabilities p_ij on [0, imax] x [0, jmax], row-major.
struct DegreeGrid {
  std::size_t imax = 0;
  std::size_t jmax = 0;
  std::vector<double> values;
  double captured_mass = 0.0;
  ModelParams params;

  std::size_t cols() const { return jmax + 1; }
  double at(std::size_t i, std::size_t j) const { return values[i * cols() + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * cols() + j]; }
};

enum class Traversal { row_major, anti_diagonal };
enum class Axis { in, out };

namespace detail {

struct RecursionCoefficients {
  double c1, c2, delta_in, delta_out, w_alpha, w_gamma;

  explicit RecursionCoefficients(const ModelParams& p) {
    const DerivedConstants d = derive(p);
    c1 = d.c1;
    c2 = d.c2;
    delta_in = p.delta_in;
    delta_out = p.delta_out;
    w_alpha = d.weight_alpha;
    w_gamma = d.weight_gamma;
  }

  // p_ij from its two predecessors; `left` = p_{i-1,j}, `down` = p_{i,j-1}
  // (zero at negative indices). The two -p_ij terms of the balance equation
  // are moved to the left, so the denominator is 1 + c1(i+d_in) + c2(j+d_out).
  double cell(std::size_t i, std::size_t j, double left, double down) const {
    const auto di = static_cast<double>(i);
    const auto dj = static_cast<double>(j);
    double num = 0.0;
    if (i > 0) num += c1 * (di - 1.0 + delta_in) * left;
    if (j > 0) num += c2 * (dj - 1.0 + delta_out) * down;
    if (i == 0 && j == 1) num += w_alpha;
    if (i == 1 && j == 0) num += w_gamma;
    return num / (1.0 + c1 * (di + delta_in) + c2 * (dj + delta_out));
  }
};

// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace detail

/// Solves the limiting-probability recursion on a finite grid.
///
/// Every cell depends only on (i-1, j) and (i, j-1), so any traversal that
/// respects that order yields bit-identical values; `order` only exists to
/// let that property be checked.
inline DegreeGrid solve_grid(const ModelParams& params, std::size_t imax, std::size_t jmax,
                             Traversal order = Traversal::row_major) {
  if (imax < 2 || jmax < 2) {
    throw DomainError("recursion grid must be at least 2 x 2 in each direction");
  }
  const detail::RecursionCoefficients rc(params);
  DegreeGrid g;
  g.imax = imax;
  g.jmax = jmax;
  g.params = params;
  g.values.assign((imax + 1) * (jmax + 1), 0.0);

  auto fill = [&](std::size_t i, std::size_t j) {
    const double left = i > 0 ? g.at(i - 1, j) : 0.0;
    const double down = j > 0 ? g.at(i, j - 1) : 0.0;
    g.at(i, j) = rc.cell(i, j, left, down);
  };

  if (order == Traversal::row_major) {
    for (std::size_t i = 0; i <= imax; ++i) {
      for (std::size_t j = 0; j <= jmax; ++j) fill(i, j);
    }
  } else {
    // cells on diagonal d = i + j depend only on diagonal d - 1
    for (std::size_t d = 0; d <= imax + jmax; ++d) {
      const std::size_t i_lo = d > jmax ? d - jmax : 0;
      const std::size_t i_hi = d < imax ? d : imax;
      for (std::size_t i = i_lo; i <= i_hi; ++i) fill(i, d - i);
    }
  }

  detail::CompensatedSum mass;
  for (double v : g.values) {
    if (!std::isfinite(v) || v < 0.0) throw NumericalError("recursion produced an invalid cell value");
    mass.add(v);
  }
  g.captured_mass = mass.value();
  return g;
}

/// Largest relative violation of the balance equation
///   p_ij = c1(i-1+d_in)p_{i-1,j} - c1(i+d_in)p_ij + c2(j-1+d_out)p_{i,j-1}
///          - c2(j+d_out)p_ij + [alpha/(alpha+gamma)]1(0,1) + [gamma/(alpha+gamma)]1(1,0)
/// over the grid, each cell scaled by the largest term magnitude in it.
inline double recursion_residual(const DegreeGrid& g) {
  const detail::RecursionCoefficients rc(g.params);
  double worst = 0.0;
  for (std::size_t i = 0; i <= g.imax; ++i) {
    for (std::size_t j = 0; j <= g.jmax; ++j) {
      const auto di = static_cast<double>(i);
      const auto dj = static_cast<double>(j);
      const double p = g.at(i, j);
      const double t1 = i > 0 ? rc.c1 * (di - 1.0 + rc.delta_in) * g.at(i - 1, j) : 0.0;
      const double t2 = -rc.c1 * (di + rc.delta_in) * p;
      const double t3 = j > 0 ? rc.c2 * (dj - 1.0 + rc.delta_out) * g.at(i, j - 1) : 0.0;
      const double t4 = -rc.c2 * (dj + rc.delta_out) * p;
      const double t5 = (i == 0 && j == 1) ? rc.w_alpha : 0.0;
      const double t6 = (i == 1 && j == 0) ? rc.w_gamma : 0.0;
      const double rhs = t1 + t2 + t3 + t4 + t5 + t6;
      const double scale = std::max({std::abs(p), std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4),
                                     std::abs(t5), std::abs(t6)});
      if (scale > 0.0) worst = std::max(worst, std::abs(rhs - p) / scale);
    }
  }
  return worst;
}

/// Row sums (axis in) or column sums (axis out) of the grid. These are lower
/// bounds for the true marginals: mass beyond the grid is dropped.
inline std::vector<double> marginal(const DegreeGrid& g, Axis axis) {
  std::vector<double> out(axis == Axis::in ? g.imax + 1 : g.jmax + 1, 0.0);
  for (std::size_t i = 0; i <= g.imax; ++i) {
    for (std::size_t j = 0; j <= g.jmax; ++j) out[axis == Axis::in ? i : j] += g.at(i, j);
  }
  return out;
}

/// Marginal of the grid [0, span_max] x [0, kmax] along `axis`, computed
/// without storing the grid: cells are swept one line at a time along the
/// summed direction, keeping two lines in memory. Cell arithmetic is the same
/// as solve_grid, so the result equals marginal(solve_grid(...)) for the same
/// extents. Use it when the summed direction must be very long, e.g. the
/// out-marginal when out-degree j corresponds to in-degrees far above j.
inline std::vector<double> streaming_marginal(const ModelParams& params, Axis axis, std::size_t kmax,
                                              std::size_t span_max) {
  if (kmax < 2 || span_max < 2) throw DomainError("marginal extents must be at least 2");
  const detail::RecursionCoefficients rc(params);
  std::vector<double> prev(span_max + 1, 0.0), cur(span_max + 1, 0.0);
  std::vector<double> out(kmax + 1, 0.0);
  for (std::size_t k = 0; k <= kmax; ++k) {
    detail::CompensatedSum line;
    for (std::size_t s = 0; s <= span_max; ++s) {
      const double along = s > 0 ? cur[s - 1] : 0.0;
      const double across = k > 0 ? prev[s] : 0.0;
      // axis out: k = j, s = i; axis in: k = i, s = j
      const double v = axis == Axis::out ? rc.cell(s, k, along, across) : rc.cell(k, s, across, along);
      cur[s] = v;
      line.add(v);
    }
    out[k] = line.value();
    std::swap(prev, cur);
  }
  return out;
}

/// Exact marginal probabilities p_0..p_kmax along `axis` from the one-dimensional
/// recursion obtained by summing the joint recursion over the other index
/// (the offset terms of the summed index telescope away).
inline std::vector<double> exact_marginal(const ModelParams& params, Axis axis, std::size_t kmax) {
  const detail::RecursionCoefficients rc(params);
  const double c = axis == Axis::in ? rc.c1 : rc.c2;
  const double delta = axis == Axis::in ? rc.delta_in : rc.delta_out;
  // in-degree 0 arises from alpha-steps, out-degree 0 from gamma-steps
  const double at0 = axis == Axis::in ? rc.w_alpha : rc.w_gamma;
  const double at1 = axis == Axis::in ? rc.w_gamma : rc.w_alpha;
  std::vector<double> out(kmax + 1, 0.0);
  for (std::size_t k = 0; k <= kmax; ++k) {
    const auto dk = static_cast<double>(k);
    double num = k > 0 ? c * (dk - 1.0 + delta) * out[k - 1] : 0.0;
    if (k == 0) num += at0;
    if (k == 1) num += at1;
    out[k] = num / (1.0 + c * (dk + delta));
  }
  return out;
}

/// Least-squares slope of log p_k against log k over k in [lo, hi]. For a
/// power-law tail p_k ~ C k^(-alpha) this estimates -alpha.
inline double tail_index_fit(std::span<const double> p, std::size_t lo, std::size_t hi) {
  if (lo < 1 || hi <= lo || hi >= p.size()) {
    throw DomainError("tail fit window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "] invalid for a marginal of length " + std::to_string(p.size()));
  }
  const auto n = static_cast<double>(hi - lo + 1);
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) {
    if (!(p[k] > 0.0)) throw DomainError("tail fit requires positive entries; p[" + std::to_string(k) + "] <= 0");
    sx += std::log(static_cast<double>(k));
    sy += std::log(p[k]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) {
    const double dx = std::log(static_cast<double>(k)) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(p[k]) - my);
  }
  return sxy / sxx;
}

}  // namespace dpa
