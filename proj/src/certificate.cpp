#include "nls/certificate.hpp"

#include <algorithm>
#include <cmath>

namespace nls::cert {

namespace {

using ops::Block;
using ops::Sign;

LedgerEntry make_entry(double value, const ops::RadialOperator& op,
                       const std::string& rhs, double r_max, double tol,
                       bool stabilized) {
  return {value, op.descriptor(), rhs, op.delta0, r_max, tol, stabilized};
}

// Solve one commutator-block BVP and record the requested inner products.
void ledger_solve(Ledger& led, const ops::RadialOperator& op, const bvp::Fn& f,
                  const std::string& rhs_name, double r_max, double tol,
                  const std::vector<std::pair<std::string, bvp::Fn>>& pairs) {
  std::vector<bvp::Fn> with;
  for (const auto& p : pairs) with.push_back(p.second);
  auto u = bvp::solve_linear_bvp(op, f, r_max, tol, with);
  for (int j = 0; j < (int)pairs.size(); ++j)
    led[pairs[j].first] =
        make_entry(u.ip(j), op, rhs_name, r_max, tol, u.ip_stabilized(j));
}

void check_options(const Problem& prob, const CertifyOptions& opt) {
  prob.validate();
  if (!(opt.tol >= 1e-13 && opt.tol <= 1e-8))
    throw InvalidConfig("certify", "tol must lie in [1e-13, 1e-8]");
  if (opt.conditions != "natural" && opt.conditions != "alternative" &&
      opt.conditions != "fmr")
    throw InvalidConfig("certify", "unknown condition set: " + opt.conditions);
  if (opt.conditions != "natural" && !prob.critical1d())
    throw InvalidConfig("certify", "condition set '" + opt.conditions +
                                    "' only applies to 1d sigma=2");
  for (size_t i = 1; i < opt.delta0_sweep.size(); ++i)
    if (opt.delta0_sweep[i] <= opt.delta0_sweep[i - 1])
      throw InvalidConfig("certify", "delta0 sweep must be sorted ascending");
}

void finish_verdict(Certificate& c) {
  c.verdict = "holds";
  c.failing_block.clear();
  for (const auto& b : c.blocks)
    if (!b.positive) {
      c.verdict = "inconclusive";
      c.failing_block = b.name;
      break;
    }
  if (c.delta0 <= 0.0 && c.verdict == "holds") c.verdict = "inconclusive";
}

void certify_3d(Certificate& c, const ops::PotentialSet& pot, double r_max,
                double tol, const std::vector<double>& sweep) {
  const soliton::Profile& R = pot.R();

  auto block = [&](Sign s, int k) {
    return ops::regularize(ops::commutator_operator(pot, s, {k, false}));
  };
  const char* pnames[] = {"calLp_k0", "calLp_k1", "calLp_k2"};
  const char* mnames[] = {"calLm_k0", "calLm_k1"};
  std::vector<idx::IndexResult> pfam, mfam;
  std::vector<ops::RadialOperator> all;
  for (int k = 0; k < 3; ++k) {
    all.push_back(block(Sign::plus, k));
    pfam.push_back(idx::compute_index(all.back(), r_max, tol));
    c.indexes[pnames[k]] = pfam.back();
  }
  for (int k = 0; k < 2; ++k) {
    all.push_back(block(Sign::minus, k));
    mfam.push_back(idx::compute_index(all.back(), r_max, tol));
    c.indexes[mnames[k]] = mfam.back();
  }
  if (!idx::verify_monotonicity(pfam) || !idx::verify_monotonicity(mfam))
    throw NumericsFault("certify", "index not monotone in the harmonic family");
  c.delta0 = idx::perturbation_sweep(all, sweep, r_max, tol);

  auto em = bvp::solve_eigenmode(pot, tol);
  c.eigenmode.present = true;
  c.eigenmode.e_unstable = em.e_unstable;
  c.eigenmode.phi1_0 = em.phi1_0;
  c.eigenmode.matching_residual = em.matching_residual;

  bvp::Fn fR = [&R](double r) { return R(r); };
  bvp::Fn fphi2 = [&em](double r) { return em.phi2(r); };
  bvp::Fn frR = [&R](double r) { return r * R(r); };
  bvp::Fn fsc = [&R](double r) { return R(r) + r * R.deriv(r); };

  auto op_p0 = ops::commutator_operator(pot, Sign::plus, {0, false});
  ledger_solve(c.ledger, op_p0, fR, "R", r_max, tol, {{"K1_k0", fR}});
  ledger_solve(c.ledger, op_p0, fphi2, "phi2", r_max, tol,
               {{"K2_k0", fphi2}, {"K3_k0", fR}});
  ledger_solve(c.ledger, block(Sign::plus, 1), frR, "r R", r_max, tol,
               {{"K1_k1", frR}});
  ledger_solve(c.ledger, ops::commutator_operator(pot, Sign::minus, {0, false}),
               fsc, "R + r R'", r_max, tol, {{"J1_k0", fsc}});

  double K1 = c.ledger["K1_k0"].value, K2 = c.ledger["K2_k0"].value,
         K3 = c.ledger["K3_k0"].value;
  c.has_gram = true;
  c.gram = gram_reduce(K1, K2, K3);
  c.eigenmode.K2_paper = K2 / (em.phi1_0 * em.phi1_0);
  c.eigenmode.K3_paper = K3 / em.phi1_0;

  c.blocks = {
      {"calLp_k0", pfam[0].count, "gram", c.gram, c.gram < 0.0},
      {"calLp_k1", pfam[1].count, "single_condition", c.ledger["K1_k1"].value,
       c.ledger["K1_k1"].value < 0.0},
      {"calLp_k2", pfam[2].count, "index0", 0.0, pfam[2].count == 0},
      {"calLm_k0", mfam[0].count, "single_condition", c.ledger["J1_k0"].value,
       c.ledger["J1_k0"].value < 0.0},
      {"calLm_k1", mfam[1].count, "index0", 0.0, mfam[1].count == 0},
  };
}

void certify_1d(Certificate& c, const ops::PotentialSet& pot, double r_max,
                double tol, const std::vector<double>& sweep,
                const std::string& conditions) {
  const soliton::Profile& R = pot.R();
  const double sig = pot.problem().sigma;

  auto op = [&](Sign s, bool odd) {
    return ops::commutator_operator(pot, s, {0, odd});
  };
  const char* names[] = {"calLp_e", "calLm_e", "calLp_o", "calLm_o"};
  std::vector<ops::RadialOperator> all = {op(Sign::plus, false),
                                          op(Sign::minus, false),
                                          op(Sign::plus, true),
                                          op(Sign::minus, true)};
  std::vector<idx::IndexResult> res;
  for (int i = 0; i < 4; ++i) {
    res.push_back(idx::compute_index(all[i], r_max, tol));
    c.indexes[names[i]] = res.back();
  }
  c.delta0 = idx::perturbation_sweep(all, sweep, r_max, tol);

  bvp::Fn fR = [&R](double x) { return R(x); };
  bvp::Fn fLam = [&R, sig](double x) { return R(x) / sig + x * R.deriv(x); };
  bvp::Fn fxR = [&R](double x) { return x * R(x); };

  ledger_solve(c.ledger, op(Sign::plus, false), fR, "R", r_max, tol,
               {{"K1_e", fR}});
  ledger_solve(c.ledger, op(Sign::minus, false), fLam, "Lambda R", r_max, tol,
               {{"J1_e", fLam}});
  ledger_solve(c.ledger, op(Sign::plus, true), fxR, "x R", r_max, tol,
               {{"K1_o", fxR}});

  // The L-^(e) block carries the condition-set choice in the critical case.
  double lm_value = c.ledger["J1_e"].value;
  std::string lm_rule = "single_condition";
  if (pot.problem().critical1d()) {
    if (conditions == "natural") {
      auto beta = bvp::solve_beta(pot, r_max, tol);
      bvp::Fn fbeta = [&beta](double x) { return beta(x); };
      ledger_solve(c.ledger, op(Sign::minus, false), fbeta, "beta", r_max, tol,
                   {{"J2_e", fbeta}, {"J3_e", fLam}});
      c.has_gram = true;
      c.gram = gram_reduce(c.ledger["J1_e"].value, c.ledger["J2_e"].value,
                           c.ledger["J3_e"].value);
      lm_value = c.gram;
      lm_rule = "gram";
    } else if (conditions == "alternative") {
      ledger_solve(c.ledger, op(Sign::minus, false), fR, "R", r_max, tol,
                   {{"Jcheck1_e", fR}});
      lm_value = c.ledger["Jcheck1_e"].value;
    } else {  // fmr
      bvp::Fn fLam2 = [&R](double x) {
        return 0.25 * R(x) + 2.0 * x * R.deriv(x) + x * x * R.deriv2(x);
      };
      ledger_solve(c.ledger, op(Sign::minus, false), fLam, "Lambda R", r_max,
                   tol, {{"Jhat1_e", fLam}});
      ledger_solve(c.ledger, op(Sign::minus, false), fLam2, "Lambda^2 R",
                   r_max, tol, {{"Jhat2_e", fLam2}, {"Jhat3_e", fLam}});
      c.has_gram = true;
      c.gram = gram_reduce(c.ledger["Jhat1_e"].value,
                           c.ledger["Jhat2_e"].value,
                           c.ledger["Jhat3_e"].value);
      lm_value = c.gram;
      lm_rule = "gram";
    }
  }

  c.blocks = {
      {"calLp_e", res[0].count, "single_condition", c.ledger["K1_e"].value,
       c.ledger["K1_e"].value < 0.0},
      {"calLm_e", res[1].count, lm_rule, lm_value, lm_value < 0.0},
      {"calLp_o", res[2].count, "single_condition", c.ledger["K1_o"].value,
       c.ledger["K1_o"].value < 0.0},
      {"calLm_o", res[3].count, "index0", 0.0, res[3].count == 0},
  };
}

}  // namespace

double gram_reduce(double K1, double K2, double K3) {
  if (std::abs(K2) < 1e-12)
    throw DegenerateGram("gram_reduce", "|K2| below 1e-12 in Gram reduction");
  return K1 - K3 * K3 / K2;
}

void compose_bound(double delta0, const ops::PotentialSet& pot, double r_max,
                   BoundInfo& out) {
  if (delta0 <= 0.0)
    throw InvalidConfig("compose_bound", "compose_bound requires delta0 > 0");
  // log S = sup_r [ log(|calV+| + |calV-|) + r^2 ]; linear space overflows.
  const int n = 4001;
  double log_S = -1e300;
  for (int i = 0; i < n; ++i) {
    double r = 1e-3 + (r_max - 1e-3) * i / (n - 1);
    double w = std::abs(pot.calV(Sign::plus, r)) +
               std::abs(pot.calV(Sign::minus, r));
    if (w > 0.0) log_S = std::max(log_S, std::log(w) + r * r);
  }
  double log_half_d0 = std::log(delta0 / 2.0);
  out.log_theta_star = std::min(0.0, log_half_d0 - log_S);
  double theta = std::exp(out.log_theta_star);  // may underflow to 0: fine
  out.log_final_delta =
      std::min(out.log_theta_star, log_half_d0) - std::log1p(theta);
  out.final_delta_positive = true;
}

Certificate certify(const Problem& prob, const CertifyOptions& opt) {
  check_options(prob, opt);
  double r_max = opt.r_max > 0.0 ? opt.r_max : default_rmax(prob.d);
  soliton::Profile R = soliton::solve_ground_state(prob, {r_max, opt.tol});
  return certify(prob, opt, R);
}

Certificate certify(const Problem& prob, const CertifyOptions& opt,
                    const soliton::Profile& R) {
  check_options(prob, opt);
  Certificate c;
  c.prob = prob;
  c.conditions = opt.conditions;
  double r_max = opt.r_max > 0.0 ? opt.r_max : default_rmax(prob.d);
  c.settings = {r_max, opt.tol};
  c.delta0_sweep = opt.delta0_sweep;

  ops::PotentialSet pot(R);

  if (prob.cubic3d())
    certify_3d(c, pot, r_max, opt.tol, opt.delta0_sweep);
  else
    certify_1d(c, pot, r_max, opt.tol, opt.delta0_sweep, opt.conditions);

  c.mourre = mourre::evaluate(pot);
  finish_verdict(c);
  if (c.delta0 > 0.0) compose_bound(c.delta0, pot, r_max, c.bound);
  return c;
}

nlohmann::json Certificate::to_json() const {
  using nlohmann::json;
  json j;
  j["schema_version"] = 1;
  j["problem"] = {{"name", prob.d == 3 ? "3d-cubic" : "1d"},
                  {"dimension", prob.d},
                  {"sigma", prob.sigma},
                  {"lambda", prob.lambda}};
  j["settings"] = {{"r_max", settings.r_max},
                   {"tol", settings.tol},
                   {"conditions", conditions},
                   {"delta0_sweep", delta0_sweep}};
  json idxj = json::object();
  for (const auto& [name, r] : indexes)
    idxj[name] = {{"count", r.count},
                  {"zeros", r.zeros},
                  {"C0", r.C0},
                  {"C1", r.C1},
                  {"stabilized", r.stabilized},
                  {"delta0", r.delta0}};
  j["indexes"] = idxj;
  j["delta0"] = delta0;
  json ledj = json::object();
  for (const auto& [name, e] : ledger)
    ledj[name] = {{"value", e.value},     {"operator", e.op},
                  {"rhs", e.rhs},         {"delta0", e.delta0},
                  {"r_max", e.r_max},     {"tol", e.tol},
                  {"stabilized", e.stabilized}};
  j["inner_products"] = ledj;
  j["gram"] = has_gram ? json(gram) : json(nullptr);
  if (eigenmode.present)
    j["eigenmode"] = {{"e_unstable", eigenmode.e_unstable},
                      {"phi1_0", eigenmode.phi1_0},
                      {"K2_paper", eigenmode.K2_paper},
                      {"K3_paper", eigenmode.K3_paper},
                      {"matching_residual", eigenmode.matching_residual}};
  else
    j["eigenmode"] = nullptr;
  j["mourre"] = {{"F_sup", mourre.F_sup},
                 {"C1", mourre.C1},
                 {"C2", mourre.C2},
                 {"mu0", mourre.mu0_applicable ? json(mourre.mu0)
                                               : json(nullptr)},
                 {"mu0_applicable", mourre.mu0_applicable},
                 {"alpha0", mourre.alpha0},
                 {"k_cutoff", mourre.k_cutoff},
                 {"harmonic_applicable", mourre.harmonic_applicable}};
  j["bound"] = {{"log_theta_star", bound.log_theta_star},
                {"log_final_delta", bound.log_final_delta},
                {"final_delta_positive", bound.final_delta_positive}};
  json blk = json::array();
  for (const auto& b : blocks)
    blk.push_back({{"name", b.name},
                   {"index", b.index},
                   {"rule", b.rule},
                   {"value", b.value},
                   {"positive", b.positive}});
  j["blocks"] = blk;
  j["verdict"] = verdict;
  j["failing_block"] = failing_block.empty() ? json(nullptr)
                                             : json(failing_block);
  return j;
}

}  // namespace nls::cert
