#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "nls/ivp.hpp"
#include "nls/operators.hpp"

namespace nls::bvp {

using Fn = std::function<double(double)>;

// Far-field artificial boundary conditions.
struct ArtificialBC {
  enum class Kind {
    decay_robin,  // d=3 tilde: u + r/(d-2+2k) u' = 0 at r_max
    neumann_1d,   // d=1: u'(x_max) = 0
    beta_robin,   // beta' + (1 - 3/x) beta = 0 at x_max (tail x^3 e^{-x})
    decay_exp     // u' + sqrt(lambda) u = 0 at x_max (full-L decay direction)
  } kind = Kind::decay_robin;
};

// Superposition solution u = u_p + c u_h (tilde variable for d = 3) of a
// commutator-block BVP, with inner products accumulated as augmented ODE
// components kappa_j' = f_j u r^{d-1}.
class BvpSolution {
 public:
  int k = 0, d = 3;
  double c = 0.0;
  int n_pairs = 0;
  double r_begin = 0.0, r_max = 0.0;
  ivp::Trajectory up, uh;

  double tilde(double r) const { return up.eval(r, 0) + c * uh.eval(r, 0); }
  double tilde_deriv(double r) const {
    return up.eval(r, 1) + c * uh.eval(r, 1);
  }
  double operator()(double r) const {
    return d == 3 ? std::pow(r, k) * tilde(r) : tilde(r);
  }
  double deriv(double r) const;
  double ip(int j) const;                  // lim kappa_j
  double ip_curve(double r, int j) const;  // accumulation curve
  bool ip_stabilized(int j) const;
  double bc_mismatch_at(double r) const;   // Robin/Neumann defect
};

BvpSolution solve_linear_bvp(const ops::RadialOperator& op, const Fn& f,
                             double r_max, double tol,
                             const std::vector<Fn>& pair_with = {});

// Two-sided superposition for full-L problems whose homogeneous mode grows
// like e^{+x}: particular + homogeneous from both ends, matched at x_match.
class TwoSidedSolution {
 public:
  double x_match = 0.0, x_max = 0.0;
  double a = 0.0, b = 0.0;  // left/right homogeneous coefficients
  int n_pairs = 0;
  ivp::Trajectory lp, lh, rp, rh;

  double operator()(double x) const;
  double deriv(double x) const;
  double ip(int j) const;
  double matching_defect = 0.0;  // derivative jump check at x_match
};

TwoSidedSolution solve_full_bvp(const ops::RadialOperator& op, const Fn& f,
                                const ArtificialBC& bc, double x_max,
                                double tol, const std::vector<Fn>& pair_with,
                                double x_match = 12.0);

// The 1d critical auxiliary problem L+ beta = -x^2 R.
TwoSidedSolution solve_beta(const ops::PotentialSet& pot, double x_max,
                            double tol,
                            const std::vector<Fn>& pair_with = {});

// Unstable eigenmode of the 3d cubic problem: L+ phi1 = -e phi2,
// L- phi2 = e phi1, found by Evans-determinant matching of two regular
// solutions from the origin against two decaying oscillatory tail solutions.
class EigenMode {
 public:
  double e_unstable = 0.0;
  double scale = 1.0;       // normalization: ||phi2||_{L^2(r^2 dr)} = 1,
                            // sign fixed by phi1(0) > 0
  double coef[4] = {};      // matching coefficients (unscaled)
  double r_mid = 0.0, r_end = 0.0;
  ivp::Trajectory left;     // combined 4-dim solve on [r1, r_mid]
  ivp::Trajectory right0, right1;  // tail basis on [r_end, r_mid]
  double phi1_0 = 0.0, phi2_0 = 0.0;
  double matching_residual = 0.0;

  double phi1(double r) const { return comp(r, 0); }
  double phi2(double r) const { return comp(r, 2); }

 private:
  double comp(double r, int i) const;
};

EigenMode solve_eigenmode(const ops::PotentialSet& pot, double tol);

}  // namespace nls::bvp
