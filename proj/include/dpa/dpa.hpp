#pragma once

#include "dpa/errors.hpp"
#include "dpa/params.hpp"
#include "dpa/rng.hpp"
#include "dpa/graph.hpp"
#include "dpa/recursion.hpp"
#include "dpa/quadrature.hpp"
#include "dpa/generating_function.hpp"
#include "dpa/densities.hpp"
#include "dpa/sampler.hpp"
#include "dpa/estimators.hpp"
