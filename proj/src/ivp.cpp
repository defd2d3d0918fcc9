#include "nls/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace nls::ivp {

namespace {

// Dormand-Prince 5(4) coefficients.
const double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
const double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
// 4th-order embedded weights.
const double kB4[7] = {5179.0 / 57600, 0.0,           7571.0 / 16695,
                       393.0 / 640,    -92097.0 / 339200,
                       187.0 / 2100,   1.0 / 40};

double hermite(double t, const Step& s, int comp, bool deriv) {
  double h = s.t1 - s.t0;
  if (h == 0.0) return deriv ? s.f0[comp] : s.y0[comp];
  double th = (t - s.t0) / h;
  double y0 = s.y0[comp], y1 = s.y1[comp];
  double m0 = s.f0[comp] * h, m1 = s.f1[comp] * h;
  double h00, h10, h01, h11;
  if (!deriv) {
    h00 = (1 + 2 * th) * (1 - th) * (1 - th);
    h10 = th * (1 - th) * (1 - th);
    h01 = th * th * (3 - 2 * th);
    h11 = th * th * (th - 1);
    return h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
  }
  h00 = 6 * th * (th - 1);
  h10 = (1 - th) * (1 - 3 * th);
  h01 = -6 * th * (th - 1);
  h11 = th * (3 * th - 2);
  return (h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1) / h;
}

}  // namespace

const Step& Trajectory::locate(double t) const {
  bool fwd = forward();
  // Clamp to the integration span (roundoff at the ends).
  if (fwd ? t <= t_begin() : t >= t_begin()) return steps.front();
  if (fwd ? t >= t_end() : t <= t_end()) return steps.back();
  std::size_t lo = 0, hi = steps.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    bool before = fwd ? (steps[mid].t1 < t) : (steps[mid].t1 > t);
    if (before)
      lo = mid + 1;
    else
      hi = mid;
  }
  return steps[lo];
}

double Trajectory::eval(double t, int comp) const {
  return hermite(t, locate(t), comp, false);
}

double Trajectory::eval_deriv(double t, int comp) const {
  return hermite(t, locate(t), comp, true);
}

std::vector<double> Trajectory::state(double t) const {
  const Step& s = locate(t);
  std::vector<double> out(dim);
  for (int i = 0; i < dim; ++i) out[i] = hermite(t, s, i, false);
  return out;
}

Trajectory integrate(const Rhs& f, int dim, double t0, double t1,
                     const std::vector<double>& y0, double tol,
                     const IntegrateOptions& opt) {
  Trajectory traj;
  traj.dim = dim;
  double dir = (t1 >= t0) ? 1.0 : -1.0;
  double span = std::abs(t1 - t0);
  if (span == 0.0)
    throw InvalidConfig("ivp", "empty integration span");

  std::vector<double> y = y0, k[7], ynew(dim), yerr(dim);
  for (auto& ki : k) ki.resize(dim);

  auto eval_rhs = [&](double t, const std::vector<double>& yy,
                      std::vector<double>& out) {
    f(t, yy.data(), out.data());
    ++traj.n_evals;
  };

  double t = t0;
  double h = dir * std::min(1e-3 * span, 1e-2);
  eval_rhs(t, y, k[0]);

  std::vector<double> ystage(dim);
  long iter = 0;
  bool done = false;
  while (!done) {
    if (++iter > opt.max_steps)
      throw StiffnessError("ivp", "step limit exceeded at t = " +
                                      std::to_string(t));
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
      throw StiffnessError("ivp", "step size underflow at t = " +
                                      std::to_string(t));
    if (dir * (t + h - t1) > 0.0) h = t1 - t;

    for (int s = 1; s < 7; ++s) {
      for (int i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += kA[s][j] * k[j][i];
        ystage[i] = y[i] + h * acc;
      }
      eval_rhs(t + kC[s] * h, ystage, k[s]);
    }
    // k[6] is f(t+h, y_new) since the last stage uses the 5th-order weights.
    for (int i = 0; i < dim; ++i) ynew[i] = ystage[i];

    double err = 0.0;
    for (int i = 0; i < dim; ++i) {
      double b5 = 0.0, b4 = 0.0;
      for (int j = 0; j < 6; ++j) b5 += kA[6][j] * k[j][i];
      for (int j = 0; j < 7; ++j) b4 += kB4[j] * k[j][i];
      yerr[i] = h * (b5 - b4);
      double sc = tol + tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      double q = yerr[i] / sc;
      err += q * q;
    }
    err = std::sqrt(err / dim);

    if (err <= 1.0) {
      Step st;
      st.t0 = t;
      st.t1 = t + h;
      st.y0 = y;
      st.y1 = ynew;
      st.f0 = k[0];
      st.f1 = k[6];
      ++traj.n_accepted;

      for (int i = 0; i < dim; ++i)
        if (std::abs(ynew[i]) > opt.max_abs)
          throw BlowUpError("ivp",
                            "solution exceeded " + std::to_string(opt.max_abs) +
                                " at t = " + std::to_string(st.t1));

      // Terminal events: sample the dense output inside the step.
      int fired = -1;
      double t_event = st.t1;
      for (std::size_t ei = 0; ei < opt.events.size() && fired < 0; ++ei) {
        const Event& ev = opt.events[ei];
        const int m = 8;
        std::vector<double> ys(dim);
        double ga = 0.0, ta = st.t0;
        {
          ga = ev.fn(st.t0, st.y0.data());
        }
        for (int s = 1; s <= m; ++s) {
          double tb = st.t0 + (st.t1 - st.t0) * s / m;
          for (int i = 0; i < dim; ++i) ys[i] = hermite(tb, st, i, false);
          double gb = ev.fn(tb, ys.data());
          bool crossed = (ga * gb <= 0.0) && (ga != gb) &&
                         (ev.direction == 0 ||
                          (ev.direction < 0 ? gb < ga : gb > ga));
          if (crossed && !(ga == 0.0 && ta == st.t0 && traj.n_accepted == 1)) {
            // Bisect on the dense output.
            double lo = ta, hi = tb, glo = ga;
            for (int it = 0; it < 200; ++it) {
              double mid = 0.5 * (lo + hi);
              for (int i = 0; i < dim; ++i) ys[i] = hermite(mid, st, i, false);
              double gm = ev.fn(mid, ys.data());
              if (glo * gm <= 0.0)
                hi = mid;
              else {
                lo = mid;
                glo = gm;
              }
              if (std::abs(hi - lo) < 1e-12 * std::max(1.0, std::abs(hi)))
                break;
            }
            fired = static_cast<int>(ei);
            t_event = 0.5 * (lo + hi);
            break;
          }
          ga = gb;
          ta = tb;
        }
      }

      if (fired >= 0) {
        // Truncate the step at the event time.
        Step cut;
        cut.t0 = st.t0;
        cut.t1 = t_event;
        cut.y0 = st.y0;
        cut.f0 = st.f0;
        cut.y1.resize(dim);
        cut.f1.resize(dim);
        for (int i = 0; i < dim; ++i) cut.y1[i] = hermite(t_event, st, i, false);
        eval_rhs(t_event, cut.y1, cut.f1);
        traj.steps.push_back(std::move(cut));
        traj.event_fired = fired;
        done = true;
        break;
      }

      traj.steps.push_back(std::move(st));
      t += h;
      y = ynew;
      k[0] = k[6];  // FSAL
      if (t == t1 || dir * (t - t1) >= 0.0) done = true;
      double fac = (err == 0.0) ? 5.0
                                : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      ++traj.n_rejected;
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
    }
  }
  return traj;
}

ZeroCount count_zeros(const Trajectory& traj, int comp, double t_min_excl) {
  ZeroCount zc;
  double scale = 0.0;
  for (const Step& s : traj.steps)
    scale = std::max(scale, std::abs(s.y1[comp]));
  for (const Step& s : traj.steps) {
    const int m = 8;
    double ta = s.t0, va = hermite(ta, s, comp, false);
    for (int i = 1; i <= m; ++i) {
      double tb = s.t0 + (s.t1 - s.t0) * i / m;
      double vb = hermite(tb, s, comp, false);
      if (va * vb < 0.0) {
        double lo = ta, hi = tb, vlo = va;
        while (std::abs(hi - lo) > 1e-10) {
          double mid = 0.5 * (lo + hi);
          double vm = hermite(mid, s, comp, false);
          if (vlo * vm <= 0.0)
            hi = mid;
          else {
            lo = mid;
            vlo = vm;
          }
        }
        double loc = 0.5 * (lo + hi);
        if (loc > t_min_excl) {
          zc.locations.push_back(loc);
          ++zc.n;
        }
      } else if (va == 0.0 && ta > t_min_excl && ta != traj.t_begin()) {
        throw AmbiguousCrossing(
            "ivp", "tangential zero at t = " + std::to_string(ta) +
                       "; tighten the tolerance");
      } else if (scale > 0.0 && std::abs(va) < 1e-14 * scale &&
                 std::abs(vb) < 1e-14 * scale && ta > t_min_excl) {
        throw AmbiguousCrossing(
            "ivp", "near-tangential behavior at t = " + std::to_string(ta) +
                       "; tighten the tolerance");
      }
      ta = tb;
      va = vb;
    }
  }
  return zc;
}

AsymptoticFit fit_asymptotics(const Trajectory& traj, int k, int d, int comp,
                              bool tilde) {
  double a = traj.t_begin(), b = traj.t_end();
  if (!traj.forward()) std::swap(a, b);
  double w0 = a + 0.8 * (b - a);

  auto basis = [&](double r, double& b0, double& b1) {
    if (d == 1) {
      b0 = 1.0;
      b1 = r;
    } else {
      b0 = std::pow(r, k);
      b1 = std::pow(r, 2 - d - k);
    }
  };

  auto fit_window = [&](double lo, double hi, double& C0, double& C1,
                        double& res) {
    const int n = 25;
    // Normal equations for the 2-parameter least squares.
    double a00 = 0, a01 = 0, a11 = 0, r0 = 0, r1 = 0;
    for (int i = 0; i < n; ++i) {
      double r = lo + (hi - lo) * i / (n - 1);
      double v = traj.eval(r, comp);
      if (tilde) v *= std::pow(r, k);
      double b0, b1;
      basis(r, b0, b1);
      a00 += b0 * b0;
      a01 += b0 * b1;
      a11 += b1 * b1;
      r0 += b0 * v;
      r1 += b1 * v;
    }
    double det = a00 * a11 - a01 * a01;
    if (std::abs(det) < 1e-300)
      throw WindowTooSmall("ivp", "degenerate asymptotics fit window");
    C0 = (a11 * r0 - a01 * r1) / det;
    C1 = (a00 * r1 - a01 * r0) / det;
    res = 0.0;
    for (int i = 0; i < n; ++i) {
      double r = lo + (hi - lo) * i / (n - 1);
      double v = traj.eval(r, comp);
      if (tilde) v *= std::pow(r, k);
      double b0, b1;
      basis(r, b0, b1);
      res = std::max(res, std::abs(v - C0 * b0 - C1 * b1));
    }
  };

  AsymptoticFit out;
  double c0a, c1a, ra, c0b, c1b, rb;
  fit_window(w0, w0 + 0.5 * (b - w0), c0a, c1a, ra);
  fit_window(w0 + 0.5 * (b - w0), b, c0b, c1b, rb);
  fit_window(w0, b, out.C0, out.C1, out.residual);
  double s0 = std::max({std::abs(c0a), std::abs(c0b), 1e-300});
  double s1 = std::max({std::abs(c1a), std::abs(c1b), 1e-300});
  bool c0_ok = std::abs(c0a - c0b) <= 0.01 * s0 || s0 < 1e-10 * s1;
  bool c1_ok = std::abs(c1a - c1b) <= 0.01 * s1 || s1 < 1e-10 * s0;
  out.stabilized = c0_ok && c1_ok;
  return out;
}

}  // namespace nls::ivp
