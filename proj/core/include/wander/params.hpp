#pragma once

#include "wander/wide.hpp"

namespace wander {

// The single source of truth for the construction. gamma is log R_1.
struct ConstructionParams {
  Real gamma;
  double delta = 0.01;  // wandering-disk radius factor, D_n = D(xi_n, delta*R_n/n^4)
  int max_level = 20;   // deepest level whose sequences are materialized
  int samples = 256;    // boundary sampling budget per check
  int sig_bits = 64;    // significand width of the wide-real arithmetic
};

// Validates and returns a parameter set. Validity is not admissibility:
// gamma = 1 constructs fine and then fails verify_inequalities.
ConstructionParams make_params(double gamma, double delta, int max_level,
                               int samples, int sig_bits);
ConstructionParams make_params(Real gamma, double delta, int max_level,
                               int samples, int sig_bits);

}  // namespace wander
