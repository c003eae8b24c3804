#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "dpa/errors.hpp"

namespace dpa {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
};

namespace detail {

// 21-point Gauss-Kronrod rule (QUADPACK dqk21).
inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double kWg[5] = {0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
                                  0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
                                  0.295524224714752870173892994651338};

struct Panel {
  double lo, hi, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod21(F& f, double lo, double hi) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double fv1[10], fv2[10];
  const double fc = f(centre);
  double res_g = 0.0;
  double res_k = kWgk[10] * fc;
  double res_abs = std::abs(res_k);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(centre - dx);
    fv2[j] = f(centre + dx);
    const double sum = fv1[j] + fv2[j];
    res_k += kWgk[j] * sum;
    res_abs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) res_g += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * res_k;
  double res_asc = kWgk[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j) res_asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  const double width = std::abs(half);
  res_abs *= width;
  res_asc *= width;
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(err, 50.0 * eps * res_abs);
  const double value = res_k * half;
  if (!std::isfinite(value)) throw NumericalError("non-finite integrand value on [" + std::to_string(lo) + ", " +
                                                  std::to_string(hi) + "]");
  return {lo, hi, value, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod quadrature of f over [lo, hi]. Subdivides
/// the panel with the largest error estimate until the summed estimate is at
/// most max(abs_tol, rel_tol * |result|). The rule never evaluates the
/// endpoints, so integrable endpoint singularities are acceptable.
template <class F>
QuadResult integrate_on_interval(F&& f, double lo, double hi, double rel_tol = 1e-10, double abs_tol = 0.0,
                                 int max_intervals = 5000) {
  if (!(std::isfinite(lo) && std::isfinite(hi))) throw DomainError("integration limits must be finite");
  if (lo == hi) return {};
  if (hi < lo) {
    QuadResult r = integrate_on_interval(f, hi, lo, rel_tol, abs_tol, max_intervals);
    r.value = -r.value;
    return r;
  }
  // the per-panel roundoff floor is 50 eps |f|; tighter targets are unreachable
  rel_tol = std::max(rel_tol, 200.0 * std::numeric_limits<double>::epsilon());

  std::priority_queue<detail::Panel> heap;
  heap.push(detail::gauss_kronrod21(f, lo, hi));
  double total = heap.top().value;
  double error = heap.top().error;
  int intervals = 1;
  double frozen_error = 0.0;  // error of panels too narrow to split further
  double frozen_value = 0.0;
  while (error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (heap.empty()) break;
    if (intervals >= max_intervals) {
      throw NumericalError("adaptive quadrature did not converge after " + std::to_string(max_intervals) +
                           " panels (estimate " + std::to_string(total) + ", error " + std::to_string(error) +
                           ")");
    }
    const detail::Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      frozen_error += worst.error;
      frozen_value += worst.value;
      continue;
    }
    const detail::Panel left = detail::gauss_kronrod21(f, worst.lo, mid);
    const detail::Panel right = detail::gauss_kronrod21(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // re-sum to shed the drift of the incremental updates
  double value = frozen_value, err = frozen_error;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  if (err > std::max(abs_tol, rel_tol * std::abs(value))) {
    throw NumericalError("adaptive quadrature stalled at roundoff level (error " + std::to_string(err) + ")");
  }
  return {value, err, intervals};
}

/// Integral of f over [lo, inf), mapped to a finite interval with z = 1/u on
/// [max(lo, 1), inf) and integrated directly on [lo, 1) when lo < 1.
template <class F>
QuadResult integrate_to_infinity(F&& f, double lo, double rel_tol = 1e-10, double abs_tol = 0.0) {
  auto tail = [&f](double u) {
    const double z = 1.0 / u;
    return f(z) * z * z;
  };
  if (lo >= 1.0) return integrate_on_interval(tail, 0.0, 1.0 / lo, rel_tol, abs_tol);
  QuadResult head = integrate_on_interval(f, lo, 1.0, rel_tol, abs_tol);
  QuadResult rest = integrate_on_interval(tail, 0.0, 1.0, rel_tol, abs_tol);
  return {head.value + rest.value, head.abs_error + rest.abs_error, head.intervals + rest.intervals};
}

/// Arguments of K(q; x, y, a) = int_0^inf t^q exp(-(x t + y t^a)) dt.
struct KernelQuery {
  double q = 0.0;
  double x = 0.0;
  double y = 0.0;
  double a = 1.0;
  double rel_tol = 1e-10;
};

/// log K(q; x, y, a).
///
/// With t = e^s the integrand becomes exp(psi(s)),
///   psi(s) = (q + 1) s - x e^s - y e^(a s),
/// which is strictly concave in s. The integral is taken over a window around
/// the mode of psi wide enough that psi has dropped by 50 at both ends, with the
/// mode factored out so that very large or very small K do not overflow.
inline double log_kernel_K(const KernelQuery& k) {
  if (!(std::isfinite(k.q) && std::isfinite(k.x) && std::isfinite(k.y) && std::isfinite(k.a))) {
    throw DomainError("kernel arguments must be finite");
  }
  if (k.x < 0.0 || k.y < 0.0) throw DomainError("kernel coefficients x, y must be nonnegative");
  if (!(k.a > 0.0)) throw DomainError("kernel exponent a must be positive");
  if (k.x == 0.0 && k.y == 0.0) throw DomainError("kernel diverges at infinity: x = y = 0");
  if (!(k.q > -1.0)) throw DomainError("kernel diverges at zero: q = " + std::to_string(k.q) + " <= -1");

  const double qp1 = k.q + 1.0;
  const double lx = k.x > 0.0 ? std::log(k.x) : 0.0;
  const double ly = k.y > 0.0 ? std::log(k.y) : 0.0;
  auto xterm = [&](double s) { return k.x > 0.0 ? std::exp(lx + s) : 0.0; };
  auto yterm = [&](double s) { return k.y > 0.0 ? std::exp(ly + k.a * s) : 0.0; };
  auto psi = [&](double s) { return qp1 * s - xterm(s) - yterm(s); };
  auto dpsi = [&](double s) { return qp1 - xterm(s) - k.a * yterm(s); };

  // Bracket and solve dpsi = 0; dpsi decreases from q+1 > 0 to -inf.
  double s_lo = 0.0, s_hi = 0.0, step = 1.0;
  if (dpsi(0.0) > 0.0) {
    while (dpsi(s_hi) > 0.0) {
      s_lo = s_hi;
      s_hi += step;
      step *= 2.0;
    }
  } else {
    while (dpsi(s_lo) <= 0.0) {
      s_hi = s_lo;
      s_lo -= step;
      step *= 2.0;
    }
  }
  double mode = 0.5 * (s_lo + s_hi);
  for (int it = 0; it < 200 && s_hi - s_lo > 1e-13 * std::max(1.0, std::abs(mode)); ++it) {
    const double g = dpsi(mode);
    if (g > 0.0) s_lo = mode; else s_hi = mode;
    const double curvature = xterm(mode) + k.a * k.a * yterm(mode);
    double next = mode + g / curvature;  // Newton step
    if (!(next > s_lo && next < s_hi)) next = 0.5 * (s_lo + s_hi);
    mode = next;
  }
  const double peak = psi(mode);
  const double width = 1.0 / std::sqrt(xterm(mode) + k.a * k.a * yterm(mode));

  constexpr double kDrop = 50.0;
  auto reach = [&](double dir) {
    double off = 2.0 * width;
    while (peak - psi(mode + dir * off) < kDrop) off *= 2.0;
    return mode + dir * off;
  };
  const double left = reach(-1.0);
  const double right = reach(+1.0);
  auto integrand = [&](double s) { return std::exp(psi(s) - peak); };
  const double rel = std::max(k.rel_tol, 1e-14);
  const double mass = integrate_on_interval(integrand, left, mode, rel).value +
                      integrate_on_interval(integrand, mode, right, rel).value;
  return peak + std::log(mass);
}

/// K(q; x, y, a) = int_0^inf t^q exp(-(x t + y t^a)) dt to relative tolerance rel_tol.
inline double kernel_K(const KernelQuery& k) { return std::exp(log_kernel_K(k)); }

inline double kernel_K(double q, double x, double y, double a, double rel_tol = 1e-10) {
  return kernel_K(KernelQuery{q, x, y, a, rel_tol});
}

inline double log_kernel_K(double q, double x, double y, double a, double rel_tol = 1e-10) {
  return log_kernel_K(KernelQuery{q, x, y, a, rel_tol});
}

}  // namespace dpa
