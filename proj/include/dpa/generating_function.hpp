#pragma once

#include <cmath>
#include <string>

#include "dpa/errors.hpp"
#include "dpa/params.hpp"
#include "dpa/quadrature.hpp"

namespace dpa {

/// The two component generating functions: phi = w_gamma x phi1 + w_alpha y phi2.
struct PhiSplit {
  double phi1 = 0.0;
  double phi2 = 0.0;
};

namespace detail {

inline void check_unit_square(double x, double y) {
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
    throw DomainError("generating function arguments must lie in [0, 1]^2, got (" + std::to_string(x) + ", " +
                      std::to_string(y) + ")");
  }
}

// c1^-1 int_1^inf z^-(1+1/c1) (x+(1-x)z)^-din (y+(1-y)z^a)^-dout dz, with z = e^s.
// The integrand is bounded by e^(-s/c1), so cutting at s = 40 c1 loses < e^-40.
inline double mixed_nb_integral(const DerivedConstants& d, double x, double y, double din, double dout,
                                double rel_tol) {
  const double inv_c1 = 1.0 / d.c1;
  auto integrand = [&](double s) {
    double log_v = -s * inv_c1;
    if (din != 0.0) log_v -= din * std::log(x + (1.0 - x) * std::exp(s));
    if (dout != 0.0) log_v -= dout * std::log(y + (1.0 - y) * std::exp(d.a * s));
    return std::exp(log_v);
  };
  return inv_c1 * integrate_on_interval(integrand, 0.0, 40.0 * d.c1, rel_tol).value;
}

}  // namespace detail

/// phi1 and phi2, each a Pareto mixture of products of negative binomial
/// generating functions.
inline PhiSplit phi_split(const ModelParams& p, double x, double y, double rel_tol = 1e-10) {
  detail::check_unit_square(x, y);
  const DerivedConstants d = derive(p);
  return {detail::mixed_nb_integral(d, x, y, p.delta_in + 1.0, p.delta_out, rel_tol),
          detail::mixed_nb_integral(d, x, y, p.delta_in, p.delta_out + 1.0, rel_tol)};
}

/// Joint generating function phi(x, y) = sum_ij p_ij x^i y^j of the limiting
/// in/out-degree law, evaluated from its closed integral form.
inline double phi(const ModelParams& p, double x, double y, double rel_tol = 1e-10) {
  detail::check_unit_square(x, y);
  const DerivedConstants d = derive(p);
  double value = 0.0;
  if (d.weight_gamma > 0.0 && x > 0.0) {
    value += d.weight_gamma * x * detail::mixed_nb_integral(d, x, y, p.delta_in + 1.0, p.delta_out, rel_tol);
  }
  if (d.weight_alpha > 0.0 && y > 0.0) {
    value += d.weight_alpha * y * detail::mixed_nb_integral(d, x, y, p.delta_in, p.delta_out + 1.0, rel_tol);
  }
  return value;
}

/// Residual of the first-order PDE satisfied by phi in the open unit square,
///   [c1 d_in (1-x) + c2 d_out (1-y) + 1] phi + c1 x(1-x) phi_x + c2 y(1-y) phi_y
///     - alpha/(alpha+gamma) y - gamma/(alpha+gamma) x,
/// with partial derivatives by central differences of step h. Quadrature runs
/// at rel_tol so that its noise divided by h stays far below the O(h^2)
/// truncation error.
inline double pde_residual(const ModelParams& p, double x, double y, double h = 1e-4, double rel_tol = 1e-13) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  if (!(x - h > 0.0 && x + h < 1.0 && y - h > 0.0 && y + h < 1.0)) {
    throw DomainError("PDE residual needs an interior point at distance > h from the boundary");
  }
  const DerivedConstants d = derive(p);
  const double f = phi(p, x, y, rel_tol);
  const double fx = (phi(p, x + h, y, rel_tol) - phi(p, x - h, y, rel_tol)) / (2.0 * h);
  const double fy = (phi(p, x, y + h, rel_tol) - phi(p, x, y - h, rel_tol)) / (2.0 * h);
  return (d.c1 * p.delta_in * (1.0 - x) + d.c2 * p.delta_out * (1.0 - y) + 1.0) * f +
         d.c1 * x * (1.0 - x) * fx + d.c2 * y * (1.0 - y) * fy - d.weight_alpha * y - d.weight_gamma * x;
}

}  // namespace dpa
