#pragma once

#include "nls/common.hpp"

namespace nls {

// The PDE instance: i psi_t + Delta psi + g(|psi|^2) psi = 0 with
// g(s) = s^sigma, linearized about the ground state of frequency lambda.
// All certified runs fix lambda = 1.
struct Problem {
  int d = 3;            // spatial dimension, 1 or 3
  double sigma = 1.0;   // nonlinearity exponent, g(s) = s^sigma
  double lambda = 1.0;  // soliton frequency

  void validate() const {
    if (d != 1 && d != 3)
      throw UnsupportedDimension("problem", "d must be 1 or 3");
    if (!(sigma > 0.0))
      throw InvalidConfig("problem", "sigma must be positive");
    if (!(lambda > 0.0))
      throw InvalidConfig("problem", "lambda must be positive");
  }

  bool cubic3d() const { return d == 3 && sigma == 1.0; }
  bool critical1d() const { return d == 1 && sigma == 2.0; }
};

struct SolverSettings {
  double r_max = 0.0;  // 0 selects the per-dimension default
  double tol = 1e-12;
};

inline double default_rmax(int d) { return d == 1 ? 30.0 : 40.0; }

}  // namespace nls
