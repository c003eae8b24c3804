#pragma once

// Densities of the tail (limit) measure of the in/out-degree law and of the
// derived ratio and angular laws. Every density routes through the single
// kernel K(q; x, y, a) of quadrature.hpp.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "dpa/errors.hpp"
#include "dpa/params.hpp"
#include "dpa/quadrature.hpp"

namespace dpa {

namespace detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log of  weight / (Gamma(d1) Gamma(d2)), or -inf when weight == 0.
// A Gamma pole with a nonzero weight means the component has no Lebesgue
// density (its mass sits on an axis), which is a domain error.
inline double log_branch_coefficient(double weight, double d1, double d2, const char* term) {
  if (weight == 0.0) return kNegInf;
  if (!(d1 > 0.0) || !(d2 > 0.0)) {
    throw DomainError(std::string(term) +
                      " term has a Gamma pole (delta_in or delta_out = 0) while its branch weight is nonzero");
  }
  return std::log(weight) - std::lgamma(d1) - std::lgamma(d2);
}

inline double log_sum_exp(double u, double v) {
  if (u == kNegInf) return v;
  if (v == kNegInf) return u;
  const double m = std::max(u, v);
  return m + std::log(std::exp(u - m) + std::exp(v - m));
}

}  // namespace detail

/// Density f(x, y) of the limit measure of (I, O) under the scalings
/// h^(1/(alpha_in-1)) and h^(1/(alpha_out-1)):
///   f = c1^-1 w_gamma/(G(d_in+1)G(d_out)) x^d_in y^(d_out-1) K(q1; x, y, a)
///     + c1^-1 w_alpha/(G(d_in)G(d_out+1)) x^(d_in-1) y^d_out K(q2; x, y, a).
class TailDensity {
 public:
  explicit TailDensity(const ModelParams& p, double rel_tol = 1e-10)
      : p_(p), d_(derive(p)), rel_tol_(rel_tol) {
    const double lc1 = -std::log(d_.c1);
    log_coef1_ = detail::log_branch_coefficient(d_.weight_gamma, p.delta_in + 1.0, p.delta_out, "gamma");
    log_coef2_ = detail::log_branch_coefficient(d_.weight_alpha, p.delta_in, p.delta_out + 1.0, "alpha");
    log_coef1_ += lc1;
    log_coef2_ += lc1;
  }

  double operator()(double x, double y) const { return std::exp(log_value(x, y)); }

  double log_value(double x, double y) const {
    if (!(x > 0.0 && y > 0.0)) throw DomainError("tail density needs x > 0 and y > 0");
    const double lx = std::log(x), ly = std::log(y);
    double t1 = detail::kNegInf, t2 = detail::kNegInf;
    if (log_coef1_ != detail::kNegInf) {
      t1 = log_coef1_ + p_.delta_in * lx + (p_.delta_out - 1.0) * ly +
           log_kernel_K(d_.q1, x, y, d_.a, rel_tol_);
    }
    if (log_coef2_ != detail::kNegInf) {
      t2 = log_coef2_ + (p_.delta_in - 1.0) * lx + p_.delta_out * ly +
           log_kernel_K(d_.q2, x, y, d_.a, rel_tol_);
    }
    return detail::log_sum_exp(t1, t2);
  }

  /// Homogeneity exponent: f(s x, s^a y) = s^-(1 + a + 1/c1) f(x, y).
  double homogeneity_exponent() const { return -(1.0 + d_.a + 1.0 / d_.c1); }

  const DerivedConstants& derived() const { return d_; }

 private:
  ModelParams p_;
  DerivedConstants d_;
  double rel_tol_;
  double log_coef1_ = detail::kNegInf;
  double log_coef2_ = detail::kNegInf;
};

inline double tail_density_f(const ModelParams& p, double x, double y) { return TailDensity(p)(x, y); }

enum class Component { one, two };

/// Density f1 (component one) or f2 (component two) of the limit measures
/// V1, V2 in their original parameterization, with the mixing variable z:
///   f1 = c1^-1 /(G(d_in+1)G(d_out)) x^d_in y^(d_out-1) int_0^inf z^-(2+q1) e^-(x/z + y/z^a) dz,
///   f2 = c1^-1 /(G(d_in)G(d_out+1)) x^(d_in-1) y^d_out int_0^inf z^-(1+a+q1) e^-(x/z + y/z^a) dz.
/// The integral is evaluated directly in z with the generic integrator, not
/// through the kernel, so it serves as an independent check on TailDensity.
inline double component_density(const ModelParams& p, Component c, double x, double y, double rel_tol = 1e-10) {
  if (!(x > 0.0 && y > 0.0)) throw DomainError("component density needs x > 0 and y > 0");
  const DerivedConstants d = derive(p);
  const bool one = c == Component::one;
  const double din = one ? p.delta_in + 1.0 : p.delta_in;
  const double dout = one ? p.delta_out : p.delta_out + 1.0;
  if (!(din > 0.0 && dout > 0.0)) throw DomainError("component density has a Gamma pole");
  const double power = one ? 2.0 + d.q1 : 1.0 + d.a + d.q1;
  auto integrand = [&](double z) { return std::exp(-power * std::log(z) - x / z - y * std::pow(z, -d.a)); };
  const double integral = integrate_to_infinity(integrand, 0.0, rel_tol).value;
  const double log_pref = -std::log(d.c1) - std::lgamma(din) - std::lgamma(dout) + (din - 1.0) * std::log(x) +
                          (dout - 1.0) * std::log(y);
  return std::exp(log_pref) * integral;
}

/// Normalizing constants of the ratio density.
struct RatioDensityConstants {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double D = 0.0;
};

inline RatioDensityConstants ratio_constants(const ModelParams& p) {
  const DerivedConstants d = derive(p);
  const double inv_c1 = 1.0 / d.c1;
  // validates the Gamma poles of both terms
  const double l1 = detail::log_branch_coefficient(p.gamma, p.delta_in + 1.0, p.delta_out, "gamma");
  const double l2 = detail::log_branch_coefficient(p.alpha, p.delta_in, p.delta_out + 1.0, "alpha");
  RatioDensityConstants rc;
  if (p.gamma > 0.0) rc.D += p.gamma * std::exp(std::lgamma(inv_c1 + p.delta_in + 1.0) - std::lgamma(p.delta_in + 1.0));
  if (p.alpha > 0.0) rc.D += p.alpha * std::exp(std::lgamma(inv_c1 + p.delta_in) - std::lgamma(p.delta_in));
  if (!(rc.D > 0.0)) throw DomainError("ratio density normalizer D is not positive");
  if (l1 != detail::kNegInf) rc.theta1 = std::exp(l1) / rc.D;
  if (l2 != detail::kNegInf) rc.theta2 = std::exp(l2) / rc.D;
  return rc;
}

/// Limiting density of R = O / I^a given I > m, m -> inf:
///   f_R(r) = theta1 r^(d_out-1) K(q1; 1, r, a) + theta2 r^d_out K(q2; 1, r, a).
class RatioDensity {
 public:
  explicit RatioDensity(const ModelParams& p, double rel_tol = 1e-10)
      : p_(p), d_(derive(p)), c_(ratio_constants(p)), rel_tol_(rel_tol) {}

  double operator()(double r) const {
    if (!(r > 0.0)) throw DomainError("ratio density needs r > 0");
    const double lr = std::log(r);
    double t1 = detail::kNegInf, t2 = detail::kNegInf;
    if (c_.theta1 > 0.0) {
      t1 = std::log(c_.theta1) + (p_.delta_out - 1.0) * lr + log_kernel_K(d_.q1, 1.0, r, d_.a, rel_tol_);
    }
    if (c_.theta2 > 0.0) {
      t2 = std::log(c_.theta2) + p_.delta_out * lr + log_kernel_K(d_.q2, 1.0, r, d_.a, rel_tol_);
    }
    return std::exp(detail::log_sum_exp(t1, t2));
  }

  /// Density of arctan(R) at u in (0, pi/2): f_R(tan u) sec^2 u.
  double arctan_density(double u) const {
    if (!(u > 0.0 && u < std::numbers::pi / 2)) throw DomainError("arctan(R) density needs u in (0, pi/2)");
    const double c = std::cos(u);
    return (*this)(std::tan(u)) / (c * c);
  }

  /// P(arctan R <= u), integrated in the arctan coordinate.
  double arctan_cdf(double u, double rel_tol = 1e-9) const {
    if (u <= 0.0) return 0.0;
    if (u >= std::numbers::pi / 2) return 1.0;
    return integrate_on_interval([this](double v) { return arctan_density(v); }, 0.0, u, rel_tol).value;
  }

  /// P(R <= r).
  double cdf(double r, double rel_tol = 1e-9) const { return r <= 0.0 ? 0.0 : arctan_cdf(std::atan(r), rel_tol); }

  /// Smallest r with P(R <= r) >= q, by bisection in the arctan coordinate.
  double quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("ratio quantile level must lie in (0, 1)");
    double lo = 0.0, hi = std::numbers::pi / 2;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (arctan_cdf(mid, 1e-8) < q) lo = mid; else hi = mid;
    }
    return std::tan(hi);
  }

  const RatioDensityConstants& constants() const { return c_; }

 private:
  ModelParams p_;
  DerivedConstants d_;
  RatioDensityConstants c_;
  double rel_tol_;
};

inline double ratio_density(const ModelParams& p, double r) { return RatioDensity(p)(r); }

/// Density of the angular measure: the limit law of Theta = arctan(O / I^a)
/// given O^2 + I^(2a) large. The unnormalized form is
///   (cos t)^(1/a - 1) f((cos t)^(1/a), sin t),
/// i.e. weight w_gamma/(G(d_in+1)G(d_out)) on
///   (cos t)^(d_in/a + 1/a - 1) (sin t)^(d_out-1) K(q1; (cos t)^(1/a), sin t, a)
/// and w_alpha/(G(d_in)G(d_out+1)) on
///   (cos t)^(d_in/a - 1) (sin t)^d_out K(q2; (cos t)^(1/a), sin t, a).
/// The normalizing constant is computed once, at construction.
class AngularDensity {
 public:
  explicit AngularDensity(const ModelParams& p, double rel_tol = 1e-10)
      : p_(p), d_(derive(p)), rel_tol_(rel_tol) {
    log_w1_ = detail::log_branch_coefficient(d_.weight_gamma, p.delta_in + 1.0, p.delta_out, "gamma");
    log_w2_ = detail::log_branch_coefficient(d_.weight_alpha, p.delta_in, p.delta_out + 1.0, "alpha");
    norm_ = integrate_on_interval([this](double t) { return unnormalized(t); }, 0.0, std::numbers::pi / 2,
                                  std::max(rel_tol, 1e-10))
                .value;
    if (!(norm_ > 0.0 && std::isfinite(norm_))) throw NumericalError("angular density normalizer invalid");
  }

  double unnormalized(double theta) const {
    if (!(theta > 0.0)) throw DomainError("angular density undefined at theta = 0: sin(theta) vanishes");
    if (!(theta < std::numbers::pi / 2)) {
      throw DomainError("angular density undefined at theta = pi/2: cos(theta) vanishes");
    }
    const double lc = std::log(std::cos(theta));
    const double ls = std::log(std::sin(theta));
    const double x = std::exp(lc / d_.a);
    const double y = std::sin(theta);
    const double inv_a = 1.0 / d_.a;
    double t1 = detail::kNegInf, t2 = detail::kNegInf;
    if (log_w1_ != detail::kNegInf) {
      t1 = log_w1_ + (p_.delta_in * inv_a + inv_a - 1.0) * lc + (p_.delta_out - 1.0) * ls +
           log_kernel_K(d_.q1, x, y, d_.a, rel_tol_);
    }
    if (log_w2_ != detail::kNegInf) {
      t2 = log_w2_ + (p_.delta_in * inv_a - 1.0) * lc + p_.delta_out * ls +
           log_kernel_K(d_.q2, x, y, d_.a, rel_tol_);
    }
    return std::exp(detail::log_sum_exp(t1, t2));
  }

  double operator()(double theta) const { return unnormalized(theta) / norm_; }

  double cdf(double theta, double rel_tol = 1e-9) const {
    if (theta <= 0.0) return 0.0;
    if (theta >= std::numbers::pi / 2) return 1.0;
    return integrate_on_interval([this](double t) { return (*this)(t); }, 0.0, theta, rel_tol).value;
  }

  double normalizer() const { return norm_; }

 private:
  ModelParams p_;
  DerivedConstants d_;
  double rel_tol_;
  double log_w1_ = detail::kNegInf;
  double log_w2_ = detail::kNegInf;
  double norm_ = 1.0;
};

inline double angular_density(const ModelParams& p, double theta) { return AngularDensity(p)(theta); }

enum class DensityKind { ratio, ratio_arctan, angular, tail2d_slice };

struct DensityCurve {
  std::vector<double> abscissae;
  std::vector<double> values;
  DensityKind kind = DensityKind::ratio;
};

/// Default sampling range of each kind: (0, pi/2) for the angular laws,
/// (0, 0.999-quantile] for the ratio, and (0, 5] in y for the slice f(1, y).
inline std::pair<double, double> default_range(const ModelParams& p, DensityKind kind) {
  switch (kind) {
    case DensityKind::ratio:
      return {0.0, RatioDensity(p).quantile(0.999)};
    case DensityKind::ratio_arctan:
    case DensityKind::angular:
      return {0.0, std::numbers::pi / 2};
    case DensityKind::tail2d_slice:
      return {0.0, 5.0};
  }
  return {0.0, 1.0};
}

/// Samples a density at n points lo + (k + 1/2)(hi - lo)/n, k = 0..n-1; the
/// half-step offset keeps the open-interval endpoints out.
inline DensityCurve curve(const ModelParams& p, DensityKind kind, std::size_t n_points, double lo, double hi) {
  if (n_points == 0) throw DomainError("curve needs at least one point");
  if (!(hi > lo)) throw DomainError("curve range must be nonempty");
  DensityCurve c;
  c.kind = kind;
  c.abscissae.resize(n_points);
  c.values.resize(n_points);
  const double step = (hi - lo) / static_cast<double>(n_points);
  for (std::size_t k = 0; k < n_points; ++k) c.abscissae[k] = lo + (static_cast<double>(k) + 0.5) * step;

  switch (kind) {
    case DensityKind::ratio: {
      const RatioDensity f(p);
      for (std::size_t k = 0; k < n_points; ++k) c.values[k] = f(c.abscissae[k]);
      break;
    }
    case DensityKind::ratio_arctan: {
      const RatioDensity f(p);
      for (std::size_t k = 0; k < n_points; ++k) c.values[k] = f.arctan_density(c.abscissae[k]);
      break;
    }
    case DensityKind::angular: {
      const AngularDensity f(p);
      for (std::size_t k = 0; k < n_points; ++k) c.values[k] = f(c.abscissae[k]);
      break;
    }
    case DensityKind::tail2d_slice: {
      const TailDensity f(p);
      for (std::size_t k = 0; k < n_points; ++k) c.values[k] = f(1.0, c.abscissae[k]);
      break;
    }
  }
  return c;
}

inline DensityCurve curve(const ModelParams& p, DensityKind kind, std::size_t n_points) {
  const auto [lo, hi] = default_range(p, kind);
  return curve(p, kind, n_points, lo, hi);
}

/// Trapezoid integral of a sampled curve over its abscissae.
inline double trapezoid_mass(const DensityCurve& c) {
  double m = 0.0;
  for (std::size_t k = 1; k < c.abscissae.size(); ++k) {
    m += 0.5 * (c.values[k] + c.values[k - 1]) * (c.abscissae[k] - c.abscissae[k - 1]);
  }
  return m;
}

}  // namespace dpa
