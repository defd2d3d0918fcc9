#pragma once

#include <vector>

#include "nls/ivp.hpp"
#include "nls/operators.hpp"

namespace nls::idx {

struct IndexResult {
  std::string descriptor;
  int count = 0;
  std::vector<double> zeros;
  double C0 = 0.0, C1 = 0.0;  // far-field constants of the distinguished solution
  bool stabilized = false;
  double delta0 = 0.0;
};

// Distinguished solution of the block (unit regular initial condition),
// exposed for trajectory export.
ivp::Trajectory distinguished_trajectory(const ops::RadialOperator& op,
                                         double r_max, double tol);

// Sturm oscillation count for one commutator block: integrate the
// distinguished solution (unit regular initial condition), count its sign
// changes, and certify via the far-field fit that no zeros lie beyond the
// last detected crossing.
IndexResult compute_index(const ops::RadialOperator& op, double r_max,
                          double tol);

// N(k+1) <= N(k) along a family (a theorem; violation is a numerics fault).
bool verify_monotonicity(const std::vector<IndexResult>& results);

// Largest listed delta0 for which every block keeps its unperturbed index.
double perturbation_sweep(const std::vector<ops::RadialOperator>& blocks,
                          const std::vector<double>& delta0_list, double r_max,
                          double tol);

}  // namespace nls::idx
