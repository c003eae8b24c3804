#pragma once

// Exact sampling of the limiting (I, O) law through its mixture
// representation: a Bernoulli branch B, a Pareto mixing variable Z, and two
// negative binomial counts that are conditionally independent given Z.
//
//   B = 1 (prob. gamma/(alpha+gamma)):  I = 1 + T_{d_in+1}(1/Z),  O = T_{d_out}(Z^-a)
//   B = 0 (prob. alpha/(alpha+gamma)):  I = T_{d_in}(1/Z),        O = 1 + T_{d_out+1}(Z^-a)
//
// T_d(p) has generating function (s + (1-s)/p)^-d. It is drawn as
// Poisson(L) with L ~ Gamma(d, scale (1-p)/p): E[s^T] = E[e^{L(s-1)}] =
// (1 + (1-s)(1-p)/p)^-d, which is the same expression.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dpa/errors.hpp"
#include "dpa/params.hpp"
#include "dpa/rng.hpp"

namespace dpa {

struct NBParams {
  double delta = 1.0;  // order, possibly fractional
  double p = 0.5;      // success scale in (0, 1)
};

struct DegreeSample {
  std::uint64_t i = 0;
  std::uint64_t o = 0;
  int branch = 0;  // B
  double z = 1.0;  // Pareto mixing value
};

namespace detail {

// T_delta(p) with the degenerate cases delta = 0 or p = 1 mapped to 0.
template <class G>
std::uint64_t draw_nb(G& rng, double delta, double p) {
  if (delta == 0.0 || p >= 1.0) return 0;
  const double lambda = gamma_variate(rng, delta) * ((1.0 - p) / p);
  return poisson_variate(rng, lambda);
}

}  // namespace detail

/// Negative binomial T_delta(p) by Gamma-Poisson compounding; exact for every
/// real delta > 0.
template <class G>
std::uint64_t sample_nb(const NBParams& nb, G& rng) {
  if (!(nb.delta > 0.0) || !std::isfinite(nb.delta)) {
    throw DomainError("negative binomial order must be positive and finite");
  }
  if (!(nb.p > 0.0 && nb.p < 1.0)) throw DomainError("negative binomial p must lie in (0, 1)");
  return detail::draw_nb(rng, nb.delta, nb.p);
}

/// Pareto on [1, inf) with P(Z > z) = z^(-1/c1): Z = U^(-c1).
template <class G>
double sample_pareto(double c1, G& rng) {
  if (!(c1 > 0.0)) throw DomainError("Pareto scale c1 must be positive");
  return std::pow(uniform_open(rng), -c1);
}

/// Samples the limiting joint (in, out) degree law.
class LimitSampler {
 public:
  explicit LimitSampler(const ModelParams& p) : p_(p), d_(derive(p)) {
    if (!(p.alpha + p.gamma > 0.0)) throw DomainError("limit law needs alpha + gamma > 0");
  }

  template <class G>
  DegreeSample operator()(G& rng) const {
    DegreeSample s;
    s.branch = uniform01(rng) < d_.weight_gamma ? 1 : 0;
    s.z = sample_pareto(d_.c1, rng);
    const double p_in = 1.0 / s.z;
    const double p_out = std::pow(s.z, -d_.a);
    if (s.branch == 1) {
      s.i = 1 + detail::draw_nb(rng, p_.delta_in + 1.0, p_in);
      s.o = detail::draw_nb(rng, p_.delta_out, p_out);
    } else {
      s.i = detail::draw_nb(rng, p_.delta_in, p_in);
      s.o = 1 + detail::draw_nb(rng, p_.delta_out + 1.0, p_out);
    }
    return s;
  }

 private:
  ModelParams p_;
  DerivedConstants d_;
};

template <class G>
DegreeSample sample_limit(const ModelParams& p, G& rng) {
  return LimitSampler(p)(rng);
}

/// n draws from one seeded stream.
inline std::vector<DegreeSample> sample_limit_n(const ModelParams& p, std::size_t n, std::uint64_t seed) {
  const LimitSampler sampler(p);
  Rng rng(seed);
  std::vector<DegreeSample> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(sampler(rng));
  return out;
}

}  // namespace dpa
