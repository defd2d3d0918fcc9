#pragma once

#include <utility>
#include <vector>

#include "nls/ivp.hpp"
#include "nls/problem.hpp"

namespace nls::soliton {

// Explicit 1d ground state R(x) = ((1+sigma) lambda)^{1/(2 sigma)}
// sech^{1/sigma}(sigma sqrt(lambda) x); validated by substitution into the
// profile equation in the test suite.
double closed_form_1d(const Problem& prob, double x);
double closed_form_1d_deriv(const Problem& prob, double x);

// Radial soliton profile with dense interpolant and exponential tail splice.
// Evaluation is valid on [0, infinity): series near 0, trajectory on
// [r_start, t_splice], leading-order tail c r^{-(d-1)/2} e^{-sqrt(lambda) r}
// beyond the splice point.
class Profile {
 public:
  Problem prob;
  double b0 = 0.0;        // R(0)
  double r_max = 0.0;     // requested working domain
  double t_splice = 0.0;  // where the tail formula takes over
  double tail_c = 0.0;    // tail amplitude
  double tol = 0.0;
  double residual = 0.0;     // ODE defect estimate (re-integration check)
  double decay_slope = 0.0;  // fitted slope of log(R r^{(d-1)/2})
  ivp::Trajectory traj;

  double operator()(double r) const;
  double deriv(double r) const;
  // Second/third derivatives from the profile equation (not differencing).
  double deriv2(double r) const;
  double deriv3(double r) const;
};

Profile solve_ground_state(const Problem& prob, const SolverSettings& settings);

// Robin boundary-condition mismatch R + (1/sqrt(lambda)) R' (d = 1) or
// R + r/(1 + sqrt(lambda) r) R' (d = 3) sampled on the outer half of the
// domain; diagnostic for the artificial-BC quality.
std::vector<std::pair<double, double>> check_artificial_bc(const Profile& R);

}  // namespace nls::soliton
