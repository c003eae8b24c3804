#pragma once

#include <cmath>

#include "dpa/params.hpp"

namespace dpa::test {

inline const ModelParams P0{0.5, 0.5, 0.0, 1.0, 1.0};
inline const ModelParams P1{0.3, 0.5, 0.2, 1.0, 1.0};
// a = 1, alpha = gamma, delta_in = delta_out
inline const ModelParams Sym{0.25, 0.5, 0.25, 1.0, 1.0};

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Half-width of a 4-sigma interval for a proportion estimated from n trials.
inline double four_sigma_p(double p, double n) { return 4.0 * std::sqrt(p * (1.0 - p) / n); }

}  // namespace dpa::test
