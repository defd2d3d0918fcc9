#include "nls/bvp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>

namespace nls::bvp {

namespace {

const double kOriginStart = 1e-6;

// State layout: y = (v, v', kappa_1, ..., kappa_m).
ivp::Rhs block_rhs(const ops::RadialOperator& op, const Fn* f,
                   const std::vector<Fn>& pairs) {
  int k = op.regularized ? op.block.k : 0;
  int drift = op.drift();
  int d = op.d;
  return [&op, f, &pairs, k, drift, d](double r, const double* y, double* dy) {
    dy[0] = y[1];
    double rhs_f = 0.0;
    if (f) {
      rhs_f = (*f)(r);
      if (k > 0) rhs_f /= std::pow(r, k);
    }
    dy[1] = op.Q(r) * y[0] - (drift > 0 ? drift / r * y[1] : 0.0) - rhs_f;
    double w = (d == 3 ? r * r : 1.0) * (k > 0 ? std::pow(r, k) : 1.0);
    for (std::size_t j = 0; j < pairs.size(); ++j)
      dy[2 + j] = pairs[j](r) * y[0] * w;
  };
}

}  // namespace

double BvpSolution::deriv(double r) const {
  double vd = tilde_deriv(r);
  if (d == 3 && k > 0)
    return std::pow(r, k) * vd + k * std::pow(r, k - 1) * tilde(r);
  return vd;
}

double BvpSolution::ip(int j) const {
  return up.final_state()[2 + j] + c * uh.final_state()[2 + j];
}

double BvpSolution::ip_curve(double r, int j) const {
  return up.eval(r, 2 + j) + c * uh.eval(r, 2 + j);
}

bool BvpSolution::ip_stabilized(int j) const {
  double full = ip(j);
  double earlier = ip_curve(0.9 * r_max, j);
  return std::abs(full - earlier) <= 1e-6 * std::max(std::abs(full), 1e-30);
}

double BvpSolution::bc_mismatch_at(double r) const {
  if (d == 1) return tilde_deriv(r);
  int m = d - 2 + 2 * k;
  return tilde(r) + r / m * tilde_deriv(r);
}

BvpSolution solve_linear_bvp(const ops::RadialOperator& op, const Fn& f,
                             double r_max, double tol,
                             const std::vector<Fn>& pair_with) {
  if (op.kind != ops::Kind::commutator)
    throw InvalidBlock("bvp",
                       "use solve_full_bvp for operators with a lambda term");
  if (op.d == 3 && op.block.k >= 1 && !op.regularized)
    throw InvalidBlock("bvp", "k >= 1 blocks must be regularized first");

  int m = static_cast<int>(pair_with.size());
  int dim = 2 + m;
  int drift = op.drift();

  double r0 = (op.d == 3) ? kOriginStart : 0.0;
  std::vector<double> yp(dim, 0.0), yh(dim, 0.0);
  if (op.d == 1 && op.block.odd) {
    yh[1] = 1.0;
  } else if (op.d == 1) {
    yh[0] = 1.0;
  } else {
    double a = op.Q(0.0) / (1.0 + drift);
    yh[0] = 1.0 + 0.5 * a * r0 * r0;
    yh[1] = a * r0;
  }

  ivp::Rhs rp = block_rhs(op, &f, pair_with);
  ivp::Rhs rh = block_rhs(op, nullptr, pair_with);
  BvpSolution sol;
  sol.k = op.regularized ? op.block.k : 0;
  sol.d = op.d;
  sol.n_pairs = m;
  sol.r_begin = r0;
  sol.r_max = r_max;
  sol.up = ivp::integrate(rp, dim, r0, r_max, yp, tol);
  sol.uh = ivp::integrate(rh, dim, r0, r_max, yh, tol);

  for (const auto& st : sol.uh.steps)
    if (std::abs(st.y1[0]) > 1e12)
      throw NumericsFault("bvp",
                          "homogeneous growth exceeds 1e12; this block needs "
                          "the two-sided solver");

  const auto& ep = sol.up.final_state();
  const auto& eh = sol.uh.final_state();
  double bp, bh;
  if (op.d == 1) {
    bp = ep[1];
    bh = eh[1];
  } else {
    int mm = op.d - 2 + 2 * sol.k;
    bp = ep[0] + r_max / mm * ep[1];
    bh = eh[0] + r_max / mm * eh[1];
  }
  if (std::abs(bh) < 1e-14 * std::max(1.0, std::abs(bp)))
    throw DegenerateSolution("bvp", "homogeneous solution satisfies the far "
                                    "boundary condition; BVP not unique");
  sol.c = -bp / bh;
  return sol;
}

double TwoSidedSolution::operator()(double x) const {
  if (x <= x_match) return lp.eval(x, 0) + a * lh.eval(x, 0);
  return rp.eval(x, 0) + b * rh.eval(x, 0);
}

double TwoSidedSolution::deriv(double x) const {
  if (x <= x_match) return lp.eval(x, 1) + a * lh.eval(x, 1);
  return rp.eval(x, 1) + b * rh.eval(x, 1);
}

double TwoSidedSolution::ip(int j) const {
  // Right-side kappas were integrated downward from x_max (kappa(x_max)=0),
  // so the integral over [x_match, x_max] is minus the final value.
  double left = lp.final_state()[2 + j] + a * lh.final_state()[2 + j];
  double right = rp.final_state()[2 + j] + b * rh.final_state()[2 + j];
  return left - right;
}

TwoSidedSolution solve_full_bvp(const ops::RadialOperator& op, const Fn& f,
                                const ArtificialBC& bc, double x_max,
                                double tol, const std::vector<Fn>& pair_with,
                                double x_match) {
  if (op.d != 1)
    throw InvalidBlock("bvp", "two-sided solver implemented for d = 1");
  int m = static_cast<int>(pair_with.size());
  int dim = 2 + m;
  ivp::Rhs rhs_p = block_rhs(op, &f, pair_with);
  ivp::Rhs rhs_h = block_rhs(op, nullptr, pair_with);

  std::vector<double> ylp(dim, 0.0), ylh(dim, 0.0), yrp(dim, 0.0),
      yrh(dim, 0.0);
  if (op.block.odd)
    ylh[1] = 1.0;
  else
    ylh[0] = 1.0;
  yrh[0] = 1.0;
  switch (bc.kind) {
    case ArtificialBC::Kind::beta_robin:
      yrh[1] = -(1.0 - 3.0 / x_max);
      break;
    case ArtificialBC::Kind::decay_exp:
      yrh[1] = -std::sqrt(op.lambda);
      break;
    default:
      throw InvalidConfig("bvp", "unsupported far-field condition for the "
                                 "two-sided solver");
  }

  TwoSidedSolution s;
  s.x_match = x_match;
  s.x_max = x_max;
  s.n_pairs = m;
  s.lp = ivp::integrate(rhs_p, dim, 0.0, x_match, ylp, tol);
  s.lh = ivp::integrate(rhs_h, dim, 0.0, x_match, ylh, tol);
  s.rp = ivp::integrate(rhs_p, dim, x_max, x_match, yrp, tol);
  s.rh = ivp::integrate(rhs_h, dim, x_max, x_match, yrh, tol);

  // Continuity of value and derivative at x_match:
  //   a lh - b rh = rp - lp   (2x2 in (a, b)).
  Eigen::Matrix2d A;
  Eigen::Vector2d rhs;
  A << s.lh.final_state()[0], -s.rh.final_state()[0], s.lh.final_state()[1],
      -s.rh.final_state()[1];
  rhs << s.rp.final_state()[0] - s.lp.final_state()[0],
      s.rp.final_state()[1] - s.lp.final_state()[1];
  Eigen::Vector2d ab = A.fullPivLu().solve(rhs);
  s.a = ab(0);
  s.b = ab(1);
  s.matching_defect = (A * ab - rhs).cwiseAbs().maxCoeff() /
                      std::max(1.0, std::abs(s(x_match)));
  return s;
}

TwoSidedSolution solve_beta(const ops::PotentialSet& pot, double x_max,
                            double tol, const std::vector<Fn>& pair_with) {
  const Problem& p = pot.problem();
  if (p.d != 1 || p.sigma != 2.0)
    throw InvalidBlock("bvp", "beta problem is specific to 1d sigma = 2");
  auto op = ops::full_operator(pot, ops::Sign::plus);
  const soliton::Profile& R = pot.R();
  Fn f = [&R](double x) { return -x * x * R(x); };
  ArtificialBC bc;
  bc.kind = ArtificialBC::Kind::beta_robin;
  return solve_full_bvp(op, f, bc, x_max, tol, pair_with);
}

// ---------------------------------------------------------------------------
// Unstable eigenmode (3d cubic)

namespace {

const double kEigRmid = 6.0;
const double kEigRend = 15.0;

ivp::Rhs eig_rhs(const ops::PotentialSet& pot, double e) {
  return [&pot, e](double r, const double* y, double* dy) {
    double Vp = pot.Vp(r), Vm = pot.Vm(r);
    double lam = pot.problem().lambda;
    dy[0] = y[1];
    dy[1] = -2.0 / r * y[1] + (lam - Vp) * y[0] + e * y[2];
    dy[2] = y[3];
    dy[3] = -2.0 / r * y[3] + (lam - Vm) * y[2] - e * y[0];
  };
}

std::vector<double> eig_left_ic(const ops::PotentialSet& pot, double e,
                                double p10, double p20) {
  double r1 = kOriginStart;
  double lam = pot.problem().lambda;
  double b0 = pot.R().b0;
  double Vp0 = 3.0 * b0 * b0, Vm0 = b0 * b0;
  double a1 = ((lam - Vp0) * p10 + e * p20) / 3.0;
  double a2 = ((lam - Vm0) * p20 - e * p10) / 3.0;
  return {p10 + 0.5 * a1 * r1 * r1, a1 * r1, p20 + 0.5 * a2 * r1 * r1,
          a2 * r1};
}

std::vector<double> eig_right_ic(double e, bool imag_unit, double r) {
  // u = phi1 + i phi2 = c e^{(-alpha + i beta) r}/r with c in {1, i};
  // alpha + i beta = sqrt(lambda - i e) taken with alpha > 0.
  double rho = std::pow(1.0 + e * e, 0.25);
  double th = 0.5 * std::atan(e);
  std::complex<double> mu(-rho * std::cos(th), rho * std::sin(th));
  std::complex<double> c = imag_unit ? std::complex<double>(0, 1)
                                     : std::complex<double>(1, 0);
  std::complex<double> w = c * std::exp(mu * r) / r;
  std::complex<double> wp = c * std::exp(mu * r) * (mu / r - 1.0 / (r * r));
  return {w.real(), wp.real(), w.imag(), wp.imag()};
}

struct EvansData {
  Eigen::Matrix4d A;  // columns: L0, L1, -R0, -R1 at r_mid
  double det = 0.0;
};

EvansData evans(const ops::PotentialSet& pot, double e, double tol) {
  ivp::Rhs rhs = eig_rhs(pot, e);
  EvansData ev;
  std::vector<std::vector<double>> cols;
  for (auto [p10, p20] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}}) {
    auto t = ivp::integrate(rhs, 4, kOriginStart, kEigRmid,
                            eig_left_ic(pot, e, p10, p20), tol);
    cols.push_back(t.final_state());
  }
  for (bool im : {false, true}) {
    auto t = ivp::integrate(rhs, 4, kEigRend, kEigRmid,
                            eig_right_ic(e, im, kEigRend), tol);
    auto v = t.final_state();
    for (auto& x : v) x = -x;
    cols.push_back(v);
  }
  for (int j = 0; j < 4; ++j) {
    double n = 0.0;
    for (int i = 0; i < 4; ++i) n += cols[j][i] * cols[j][i];
    n = std::sqrt(n);
    for (int i = 0; i < 4; ++i) ev.A(i, j) = cols[j][i] / n;
  }
  ev.det = ev.A.determinant();
  return ev;
}

}  // namespace

double EigenMode::comp(double r, int i) const {
  if (r <= r_mid) {
    if (r < left.t_begin()) r = left.t_begin();
    return scale * left.eval(r, i);
  }
  if (r <= r_end)
    return scale * (coef[2] * right0.eval(r, i) + coef[3] * right1.eval(r, i));
  return 0.0;  // decayed below 1e-12 of peak amplitude
}

EigenMode solve_eigenmode(const ops::PotentialSet& pot, double tol) {
  const Problem& p = pot.problem();
  if (!p.cubic3d())
    throw InvalidBlock("bvp", "eigenmode solve is specific to the 3d cubic "
                              "problem");

  // Bracket the Evans-determinant root, then bisect.
  std::vector<std::pair<double, double>> brackets;
  double e_lo = 0.25, e_hi = 8.0, step = 0.25;
  double prev_e = e_lo, prev_d = evans(pot, e_lo, tol).det;
  for (double e = e_lo + step; e <= e_hi + 1e-12; e += step) {
    double d = evans(pot, e, tol).det;
    if (prev_d * d < 0.0) brackets.emplace_back(prev_e, e);
    prev_e = e;
    prev_d = d;
  }
  if (brackets.empty())
    throw IterationFailure("bvp", "no Evans-determinant sign change in "
                                  "(0.25, 8)");
  if (brackets.size() > 1)
    throw NumericsFault("bvp", "multiple Evans roots bracketed; expected a "
                               "single unstable eigenvalue");
  auto [lo, hi] = brackets.front();
  double dlo = evans(pot, lo, tol).det;
  while (hi - lo > 1e-13) {
    double mid = 0.5 * (lo + hi);
    double dm = evans(pot, mid, tol).det;
    if (dlo * dm <= 0.0)
      hi = mid;
    else {
      lo = mid;
      dlo = dm;
    }
  }
  double e = 0.5 * (lo + hi);
  if (e <= 0.0) throw WrongBranch("bvp", "nonpositive eigenvalue candidate");

  EigenMode em;
  em.e_unstable = e;
  em.r_mid = kEigRmid;
  em.r_end = kEigRend;

  // Null vector of the matching matrix -> combination coefficients.
  EvansData ev = evans(pot, e, tol);
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(ev.A, Eigen::ComputeFullV);
  Eigen::Vector4d c = svd.matrixV().col(3);
  em.matching_residual = (ev.A * c).norm();

  // The SVD null vector applies to the *normalized* columns; rescale to the
  // raw trajectories.
  // Rebuild raw columns to get the norms.
  {
    ivp::Rhs rhs = eig_rhs(pot, e);
    std::vector<double> norms;
    for (auto [p10, p20] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}}) {
      auto t = ivp::integrate(rhs, 4, kOriginStart, kEigRmid,
                              eig_left_ic(pot, e, p10, p20), tol);
      auto v = t.final_state();
      norms.push_back(std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] +
                                v[3] * v[3]));
    }
    for (bool im : {false, true}) {
      auto t = ivp::integrate(rhs, 4, kEigRend, kEigRmid,
                              eig_right_ic(e, im, kEigRend), tol);
      auto v = t.final_state();
      norms.push_back(std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] +
                                v[3] * v[3]));
    }
    for (int j = 0; j < 4; ++j) em.coef[j] = c(j) / norms[j];
  }

  // Dense solves for the mode itself.
  {
    ivp::Rhs rhs = eig_rhs(pot, e);
    double p10 = em.coef[0], p20 = em.coef[1];
    em.left = ivp::integrate(rhs, 4, kOriginStart, kEigRmid,
                             eig_left_ic(pot, e, p10, p20), tol);
    em.right0 = ivp::integrate(rhs, 4, kEigRend, kEigRmid,
                               eig_right_ic(e, false, kEigRend), tol);
    em.right1 = ivp::integrate(rhs, 4, kEigRend, kEigRmid,
                               eig_right_ic(e, true, kEigRend), tol);
  }

  // Normalize ||phi2||_{L^2(r^2 dr)} = 1, sign fixed by phi1(0) > 0.
  {
    auto phi2_raw = [&](double r) {
      if (r <= kEigRmid) return em.left.eval(std::max(r, kOriginStart), 2);
      return em.coef[2] * em.right0.eval(r, 2) +
             em.coef[3] * em.right1.eval(r, 2);
    };
    const int n = 8000;  // composite Simpson, even count
    double a = kOriginStart, b = kEigRend, h = (b - a) / n, s = 0.0;
    for (int i = 0; i <= n; ++i) {
      double r = a + i * h;
      double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      double v = phi2_raw(r);
      s += w * v * v * r * r;
    }
    double n2 = s * h / 3.0;
    if (n2 <= 0.0) throw NumericsFault("bvp", "eigenmode norm vanished");
    em.scale = 1.0 / std::sqrt(n2);
    if (em.coef[0] < 0.0) em.scale = -em.scale;  // phi1(0) = coef[0] pre-scale
  }
  em.phi1_0 = em.scale * em.coef[0];
  em.phi2_0 = em.scale * em.coef[1];
  return em;
}

}  // namespace nls::bvp
