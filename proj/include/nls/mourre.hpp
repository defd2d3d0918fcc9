#pragma once

#include <functional>

#include "nls/operators.hpp"

namespace nls::mourre {

// Sampler for {V, V', V'', V'''} of one potential; lets the tests feed
// synthetic (zero / scaled) potentials through the same bound code.
using DerivFn = std::function<void(double r, double out[4])>;

struct MourreReport {
  double F_sup = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double mu0 = 0.0;           // valid when mu0_applicable
  bool mu0_applicable = false;
  double alpha0 = 0.0;        // d = 3 only
  int k_cutoff = 0;
  bool harmonic_applicable = false;
};

// Large-eigenvalue bound of the commutator argument: sup norms of the
// multiplier function F and the first-order coefficients, then
// mu0 = sqrt((lambda^2 + C1)/(1 - C2)) when C2 < 1.  C_d = d.
void large_eigenvalue_bound(const DerivFn& Vm, const DerivFn& Vp, int d,
                            double lambda, double r_hi, MourreReport& rep);

// Spherical-harmonic cutoff (d = 3): smallest alpha whose quartic weight
// dominates every potential term of the quadratic form, by bisection; then
// k_cutoff = min{k : k(k+d-2) >= alpha^2}.  Throws nothing; failure to find
// alpha below the ceiling is reported via harmonic_applicable = false.
void harmonic_bound(const DerivFn& Vm, const DerivFn& Vp, int d, double lambda,
                    double r_hi, MourreReport& rep, double ceiling = 1e4);

MourreReport evaluate(const ops::PotentialSet& pot);

}  // namespace nls::mourre
