#include "nls/index.hpp"

#include <cmath>

namespace nls::idx {

namespace {

int sgn(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

}  // namespace

ivp::Trajectory distinguished_trajectory(const ops::RadialOperator& op,
                                         double r_max, double tol) {
  if (op.kind != ops::Kind::commutator)
    throw InvalidBlock("index", "index counting applies to commutator blocks");
  if (op.d == 3 && op.block.k >= 1 && !op.regularized)
    throw InvalidBlock("index", "k >= 1 blocks must be regularized first");

  const int drift = op.drift();
  ivp::Rhs rhs = [&op, drift](double r, const double* y, double* dy) {
    dy[0] = y[1];
    dy[1] = op.Q(r) * y[0] - (drift > 0 ? drift / r * y[1] : 0.0);
  };

  double r0;
  std::vector<double> y0;
  if (op.d == 3) {
    r0 = 1e-6;
    // Frobenius start-up: u'(0) = 0 forced by the drift, u''(0) = Q(0) u0 /
    // (1 + drift).
    double q0 = op.Q(0.0);
    double a = q0 / (1.0 + drift);
    y0 = {1.0 + 0.5 * a * r0 * r0, a * r0};
  } else {
    r0 = 0.0;
    y0 = op.block.odd ? std::vector<double>{0.0, 1.0}
                      : std::vector<double>{1.0, 0.0};
  }
  return ivp::integrate(rhs, 2, r0, r_max, y0, tol);
}

IndexResult compute_index(const ops::RadialOperator& op, double r_max,
                          double tol) {
  ivp::Trajectory traj = distinguished_trajectory(op, r_max, tol);
  double r0 = traj.t_begin();
  ivp::ZeroCount zc = ivp::count_zeros(traj, 0, 1e-9);
  ivp::AsymptoticFit fit =
      ivp::fit_asymptotics(traj, op.block.k, op.d, 0, op.d == 3);
  if (!fit.stabilized)
    throw WindowTooSmall(
        "index", "far-field constants not stabilized for " + op.descriptor());

  // No-further-zeros certificate: the solution and the fitted free-field
  // form must share a constant sign over the fit window, and the fitted form
  // must stay away from zero all the way to infinity.
  double w0 = r0 + 0.8 * (r_max - r0);
  if (!zc.locations.empty() && zc.locations.back() >= w0)
    throw WindowTooSmall("index", "crossing inside the asymptotics window of " +
                                      op.descriptor());
  int k = op.block.k, d = op.d;
  auto fitted = [&](double r) {
    return d == 1 ? fit.C0 + fit.C1 * r
                  : fit.C0 * std::pow(r, k) + fit.C1 * std::pow(r, 2 - d - k);
  };
  double uref = traj.eval(r_max, 0) * (d == 3 ? std::pow(r_max, k) : 1.0);
  int want = sgn(uref);
  for (int i = 0; i <= 40; ++i) {
    double r = w0 + (r_max - w0) * i / 40.0;
    double u = traj.eval(r, 0) * (d == 3 ? std::pow(r, k) : 1.0);
    if (sgn(u) != want || sgn(fitted(r)) != want)
      throw NumericsFault("index", "no-further-zeros certificate failed for " +
                                       op.descriptor());
  }
  double lim = (d == 1 && std::abs(fit.C1) * r_max > 1e-6 * std::abs(fit.C0))
                   ? fit.C1
                   : fit.C0;
  if (sgn(lim) != want)
    throw NumericsFault("index", "fitted tail changes sign beyond r_max for " +
                                     op.descriptor());

  IndexResult res;
  res.descriptor = op.descriptor();
  res.count = zc.n;
  res.zeros = zc.locations;
  res.C0 = fit.C0;
  res.C1 = fit.C1;
  res.stabilized = fit.stabilized;
  res.delta0 = op.delta0;
  return res;
}

bool verify_monotonicity(const std::vector<IndexResult>& results) {
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].count > results[i - 1].count) return false;
  return true;
}

double perturbation_sweep(const std::vector<ops::RadialOperator>& blocks,
                          const std::vector<double>& delta0_list, double r_max,
                          double tol) {
  if (delta0_list.empty())
    throw InvalidConfig("index", "empty delta0 sweep");
  for (std::size_t i = 1; i < delta0_list.size(); ++i)
    if (delta0_list[i] <= delta0_list[i - 1])
      throw InvalidConfig("index", "delta0 sweep must be sorted ascending");

  std::vector<int> base;
  for (const auto& op : blocks)
    base.push_back(compute_index(op, r_max, tol).count);

  double accepted = -1.0;
  for (double d0 : delta0_list) {
    bool ok = true;
    for (std::size_t i = 0; i < blocks.size() && ok; ++i) {
      ops::RadialOperator op = blocks[i];
      op.delta0 = d0;
      ok = compute_index(op, r_max, tol).count == base[i];
    }
    if (ok)
      accepted = d0;
    else
      break;
  }
  if (accepted < 0.0)
    throw PerturbationFailure(
        "index", "index changes already at the smallest delta0 in the sweep");
  return accepted;
}

}  // namespace nls::idx
