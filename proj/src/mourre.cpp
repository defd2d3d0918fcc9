#include "nls/mourre.hpp"

#include <cmath>

namespace nls::mourre {

namespace {

const double kGridLo = 1e-3;
const double kGridHi = 16.0;
const int kGridN = 64001;

// Radial identities used throughout:
//   Delta V        = V'' + (d-1) V'/r
//   Delta(r V')    = r V''' + (d+1) V'' + (d-1) V'/r
//   x.grad(DeltaV) = r V''' + (d-1) V'' - (d-1) V'/r
double lapl(const double v[4], int d, double r) {
  return v[2] + (d - 1) * v[1] / r;
}
double lapl_rVp(const double v[4], int d, double r) {
  return r * v[3] + (d + 1) * v[2] + (d - 1) * v[1] / r;
}
double xg_lapl(const double v[4], int d, double r) {
  return r * v[3] + (d - 1) * v[2] - (d - 1) * v[1] / r;
}

bool harmonic_ok(double alpha, const DerivFn& Vm, const DerivFn& Vp, int d,
                 double lam, double r_hi) {
  const double a2 = alpha * alpha;
  const int n = kGridN;
  for (int i = 0; i < n; ++i) {
    double r = kGridLo + (r_hi - kGridLo) * i / (n - 1);
    double vm[4], vp[4];
    Vm(r, vm);
    Vp(r, vp);
    // Gradient sector.
    double g_lhs = 16 * a2 / (r * r) + 8 * lam;
    double g_rhs = std::abs(4 * (vm[0] + vp[0]) + 2 * r * vm[1] - 6 * r * vp[1]);
    if (g_lhs < g_rhs) return false;
    // u^2 sector: quartic weight against the triangle-inequality sum.
    double u_lhs = 8 * a2 * a2 / (r * r * r * r) + 8 * lam * a2 / (r * r);
    double u_rhs = std::abs(4 * a2 / (r * r) * (vm[0] + vp[0])) +
                   std::abs((d * (d - 1) + 2 * a2) / r * vm[1]) +
                   std::abs(((d - 1) * (d - 2) - 2 * a2) / r * vp[1]) +
                   std::abs((d - 2) * vm[2]) + std::abs(3 * d * vp[2]) +
                   std::abs(4 * r * vp[1] * vm[0]) + std::abs(2 * r * vp[3]) +
                   std::abs(2 * lam * r * (vm[1] + vp[1]));
    if (u_lhs < u_rhs) return false;
  }
  return true;
}

}  // namespace

void large_eigenvalue_bound(const DerivFn& Vm, const DerivFn& Vp, int d,
                            double lambda, double r_hi, MourreReport& rep) {
  double F_sup = 0.0, sum_sup = 0.0, dif_sup = 0.0;
  const int n = kGridN;
  for (int i = 0; i < n; ++i) {
    double r = kGridLo + (r_hi - kGridLo) * i / (n - 1);
    double vm[4], vp[4];
    Vm(r, vm);
    Vp(r, vp);
    double F = 4 * vm[0] * vp[0] - 2 * lambda * r * (vm[1] + vp[1]) +
               2 * r * vm[1] * vp[0] + 2 * r * vp[1] * vm[0] +
               lapl_rVp(vm, d, r) + lapl_rVp(vp, d, r) -
               (xg_lapl(vm, d, r) - xg_lapl(vp, d, r)) -
               d * (lapl(vm, d, r) - lapl(vp, d, r));
    F_sup = std::max(F_sup, std::abs(F));
    sum_sup = std::max(sum_sup, std::abs(r * (vm[1] + vp[1])));
    dif_sup = std::max(dif_sup, std::abs(r * (vm[1] - vp[1])));
  }
  rep.F_sup = F_sup;
  rep.C1 = 0.25 * F_sup;
  rep.C2 = 0.25 * (2 * sum_sup + d * dif_sup);
  rep.mu0_applicable = rep.C2 < 1.0;
  rep.mu0 = rep.mu0_applicable
                ? std::sqrt((lambda * lambda + rep.C1) / (1.0 - rep.C2))
                : 0.0;
}

void harmonic_bound(const DerivFn& Vm, const DerivFn& Vp, int d, double lambda,
                    double r_hi, MourreReport& rep, double ceiling) {
  rep.harmonic_applicable = false;
  rep.alpha0 = 0.0;
  rep.k_cutoff = 0;
  double hi = 1.0;
  if (!harmonic_ok(0.0, Vm, Vp, d, lambda, r_hi)) {
    while (!harmonic_ok(hi, Vm, Vp, d, lambda, r_hi)) {
      hi *= 2.0;
      if (hi > ceiling) return;
    }
    double lo = 0.0;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      (harmonic_ok(mid, Vm, Vp, d, lambda, r_hi) ? hi : lo) = mid;
    }
    rep.alpha0 = hi;
  }
  rep.harmonic_applicable = true;
  int k = 0;
  while (k * (k + d - 2) < rep.alpha0 * rep.alpha0) ++k;
  rep.k_cutoff = k;
}

MourreReport evaluate(const ops::PotentialSet& pot) {
  const Problem& prob = pot.problem();
  DerivFn Vm = [&pot](double r, double out[4]) {
    pot.derivs(ops::Sign::minus, r, out);
  };
  DerivFn Vp = [&pot](double r, double out[4]) {
    pot.derivs(ops::Sign::plus, r, out);
  };
  MourreReport rep;
  large_eigenvalue_bound(Vm, Vp, prob.d, prob.lambda, kGridHi, rep);
  if (prob.d == 3) harmonic_bound(Vm, Vp, prob.d, prob.lambda, kGridHi, rep);
  return rep;
}

}  // namespace nls::mourre
