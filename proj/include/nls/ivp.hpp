#pragma once

#include <functional>
#include <vector>

#include "nls/common.hpp"

namespace nls::ivp {

// Right-hand side of y' = f(t, y); writes dy (dim components).
using Rhs = std::function<void(double t, const double* y, double* dy)>;

// Terminal event: integration stops when fn crosses zero in the given
// direction (-1 falling, +1 rising, 0 either).
struct Event {
  std::function<double(double t, const double* y)> fn;
  int direction = 0;
};

struct Step {
  double t0, t1;
  std::vector<double> y0, y1, f0, f1;
};

// Dense-output trajectory: per-step cubic Hermite interpolation built from
// the accepted step endpoints and their derivatives.  Supports backward
// integration (t decreasing).
class Trajectory {
 public:
  int dim = 0;
  std::vector<Step> steps;
  long n_accepted = 0;
  long n_rejected = 0;
  long n_evals = 0;
  int event_fired = -1;  // index into the events list, or -1

  double t_begin() const { return steps.front().t0; }
  double t_end() const { return steps.back().t1; }
  bool forward() const { return t_end() >= t_begin(); }

  double eval(double t, int comp) const;
  double eval_deriv(double t, int comp) const;
  std::vector<double> state(double t) const;
  const std::vector<double>& final_state() const { return steps.back().y1; }

 private:
  const Step& locate(double t) const;
};

struct IntegrateOptions {
  std::vector<Event> events;
  double max_abs = 1e100;      // blow-up guard
  long max_steps = 5000000;
};

Trajectory integrate(const Rhs& f, int dim, double t0, double t1,
                     const std::vector<double>& y0, double tol,
                     const IntegrateOptions& opt = {});

struct ZeroCount {
  int n = 0;
  std::vector<double> locations;
};

// Count simple sign changes of component comp on (t_min_excl, t_end];
// crossings refined by bisection on the dense output to width < 1e-10.
ZeroCount count_zeros(const Trajectory& traj, int comp = 0,
                      double t_min_excl = 0.0);

struct AsymptoticFit {
  double C0 = 0.0, C1 = 0.0;
  bool stabilized = false;
  double residual = 0.0;
};

// Least-squares fit of the trajectory (component comp) on the outer 20% of
// the domain against the free-equation basis {r^k, r^{2-d-k}} (d = 3) or
// {1, x} (d = 1).  When tilde is true the stored values are r^{-k} u and the
// sampled values are multiplied by r^k before fitting.  The fit is done on
// two disjoint windows; "stabilized" requires 1% agreement between them.
AsymptoticFit fit_asymptotics(const Trajectory& traj, int k, int d,
                              int comp = 0, bool tilde = false);

}  // namespace nls::ivp
