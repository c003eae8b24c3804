#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dpa/errors.hpp"

namespace dpa {

/// Parameters of the directed preferential attachment model.
///
/// alpha, beta and gamma are the probabilities of the three growth steps
/// (new node -> old node, old -> old, old -> new node); delta_in and
/// delta_out are the offsets added to in- and out-degrees when choosing
/// nodes proportionally.
struct ModelParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta_in = 0.0;
  double delta_out = 0.0;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Constants derived from ModelParams that every other module consumes.
struct DerivedConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double a = 0.0;  // c2 / c1, the standardizing exponent of I
  double rho = 0.0;
  double alpha_in = 0.0;   // tail exponent of the in-degree mass function
  double alpha_out = 0.0;  // tail exponent of the out-degree mass function
  bool in_tail_valid = false;   // alpha * delta_in + gamma > 0
  bool out_tail_valid = false;  // gamma * delta_out + alpha > 0

  // Branch weights of the two mixture components.
  double weight_gamma = 0.0;  // gamma / (alpha + gamma)
  double weight_alpha = 0.0;  // alpha / (alpha + gamma)

  // Exponents of t in the two kernel integrals of the tail density.
  double q1 = 0.0;  // 1/c1 + delta_in + a * delta_out
  double q2 = 0.0;  // a - 1 + q1
};

inline constexpr double kSimplexTolerance = 1e-12;

/// Checks the model constraints and renormalizes (alpha, beta, gamma) onto the
/// simplex when their sum is within kSimplexTolerance of 1.
///
/// Degenerate tails (alpha * delta_in + gamma == 0 or gamma * delta_out +
/// alpha == 0) are not errors; a message is appended to `warnings` instead.
inline ModelParams validate(const ModelParams& p, std::vector<std::string>* warnings = nullptr) {
  const struct {
    const char* name;
    double value;
  } fields[] = {{"alpha", p.alpha},
                {"beta", p.beta},
                {"gamma", p.gamma},
                {"delta_in", p.delta_in},
                {"delta_out", p.delta_out}};
  for (const auto& f : fields) {
    if (!std::isfinite(f.value)) {
      throw ParameterError(std::string(f.name) + " must be finite");
    }
    if (f.value < 0.0) {
      throw ParameterError(std::string(f.name) + " must be nonnegative, got " + std::to_string(f.value));
    }
  }
  for (int k = 0; k < 3; ++k) {
    if (fields[k].value >= 1.0) {
      throw ParameterError(std::string(fields[k].name) + " must be strictly smaller than 1, got " +
                           std::to_string(fields[k].value));
    }
  }
  const double sum = p.alpha + p.beta + p.gamma;
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw ParameterError("alpha + beta + gamma must equal 1, got " + std::to_string(sum));
  }

  ModelParams out = p;
  out.alpha /= sum;
  out.beta /= sum;
  out.gamma /= sum;

  if (warnings != nullptr) {
    if (!(out.alpha * out.delta_in + out.gamma > 0.0)) {
      warnings->emplace_back(
          "alpha * delta_in + gamma = 0: regular variation of the in-degree tail is not guaranteed");
    }
    if (!(out.gamma * out.delta_out + out.alpha > 0.0)) {
      warnings->emplace_back(
          "gamma * delta_out + alpha = 0: regular variation of the out-degree tail is not guaranteed");
    }
  }
  return out;
}

/// Derived constants of validated parameters.
inline DerivedConstants derive(const ModelParams& p) {
  DerivedConstants d;
  const double new_node = p.alpha + p.gamma;
  d.c1 = (p.alpha + p.beta) / (1.0 + p.delta_in * new_node);
  d.c2 = (p.beta + p.gamma) / (1.0 + p.delta_out * new_node);
  d.a = d.c2 / d.c1;
  d.rho = d.c1 * p.delta_in + d.c2 * p.delta_out + 1.0;
  d.alpha_in = 1.0 + (1.0 + p.delta_in * new_node) / (p.alpha + p.beta);
  d.alpha_out = 1.0 + (1.0 + p.delta_out * new_node) / (p.beta + p.gamma);
  d.in_tail_valid = p.alpha * p.delta_in + p.gamma > 0.0;
  d.out_tail_valid = p.gamma * p.delta_out + p.alpha > 0.0;
  d.weight_gamma = p.gamma / new_node;
  d.weight_alpha = p.alpha / new_node;
  d.q1 = 1.0 / d.c1 + p.delta_in + d.a * p.delta_out;
  d.q2 = d.a - 1.0 + d.q1;
  return d;
}

}  // namespace dpa
