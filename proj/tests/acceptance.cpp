// Acceptance gate: one criterion per invocation (--criterion N), or all.
// Prints one PASS/FAIL line per criterion; exit 0 iff every requested
// criterion passed.
#include <cmath>
#include <cstring>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nls/certificate.hpp"
#include "nls/report.hpp"

using namespace nls;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
  void check_rel(double got, double want, double rel, const std::string& name) {
    bool ok = std::abs(got - want) <= rel * std::abs(want);
    if (!ok) {
      std::ostringstream ss;
      ss.precision(8);
      ss << name << " = " << got << ", expected " << want << " within "
         << rel * 100 << "%";
      pass = false;
      notes.push_back(ss.str());
    }
  }
};

const std::vector<double> kSigmas = {2.0, 2.1, 2.5, 3.0};

cert::Certificate& get_cert(const std::string& key) {
  static std::map<std::string, cert::Certificate> cache;
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  cert::CertifyOptions opt;
  Problem prob{3, 1.0, 1.0};
  if (key != "3d") {
    double sig = std::stod(key.substr(key.find('_') + 1));
    prob = {1, sig, 1.0};
    if (key.rfind("alt_", 0) == 0) opt.conditions = "alternative";
    if (key.rfind("fmr_", 0) == 0) opt.conditions = "fmr";
  }
  return cache.emplace(key, cert::certify(prob, opt)).first->second;
}

// 1d table of Prop values, row per sigma: K1_e, J1_e, K1_o.
const std::map<double, std::array<double, 3>> kTable1d = {
    {2.0, {-0.557768, 0.2925510, -1.30410}},
    {2.1, {-0.496932, 0.2162840, -1.21364}},
    {2.5, {-0.297841, -0.0216292, -0.924662}},
    {3.0, {-0.122559, -0.2184990, -0.671783}}};

Outcome criterion1() {
  Outcome o;
  const auto& c3 = get_cert("3d");
  int want3[][2] = {{0, 1}, {1, 1}, {2, 0}};
  for (auto [k, n] : want3) {
    std::string name = "calLp_k" + std::to_string(k);
    o.check(c3.indexes.at(name).count == n, name + " index != " +
                                                std::to_string(n));
  }
  o.check(c3.indexes.at("calLm_k0").count == 1, "calLm_k0 index != 1");
  o.check(c3.indexes.at("calLm_k1").count == 0, "calLm_k1 index != 0");
  for (double sig : kSigmas) {
    const auto& c = get_cert("nat_" + std::to_string(sig));
    std::ostringstream tag;
    tag << "sigma=" << sig << " ";
    o.check(c.indexes.at("calLp_e").count == 1, tag.str() + "calLp_e != 1");
    o.check(c.indexes.at("calLm_e").count == 1, tag.str() + "calLm_e != 1");
    o.check(c.indexes.at("calLp_o").count == 1, tag.str() + "calLp_o != 1");
    o.check(c.indexes.at("calLm_o").count == 0, tag.str() + "calLm_o != 0");
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (double sig : kSigmas) {
    const auto& c = get_cert("nat_" + std::to_string(sig));
    const auto& row = kTable1d.at(sig);
    std::ostringstream tag;
    tag << "sigma=" << sig << " ";
    o.check_rel(c.ledger.at("K1_e").value, row[0], 0.005, tag.str() + "K1_e");
    o.check_rel(c.ledger.at("J1_e").value, row[1], 0.005, tag.str() + "J1_e");
    o.check_rel(c.ledger.at("K1_o").value, row[2], 0.005, tag.str() + "K1_o");
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto& c = get_cert("3d");
  o.check_rel(c.ledger.at("K1_k0").value, 1.04846, 0.005, "K1_k0");
  o.check_rel(c.ledger.at("K1_k1").value, -0.581854, 0.005, "K1_k1");
  o.check_rel(c.ledger.at("J1_k0").value, -0.662038, 0.005, "J1_k0");
  o.check_rel(c.gram, -5.22138, 0.01, "K1 - K3^2/K2");
  o.check(c.ledger.at("K2_k0").value > 0.0, "K2 sign (want > 0)");
  o.check(c.ledger.at("K3_k0").value < 0.0, "K3 sign (want < 0)");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto& nat = get_cert("nat_" + std::to_string(2.0));
  o.check_rel(nat.ledger.at("J2_e").value, 3.77915, 0.01, "J2_e");
  o.check_rel(nat.ledger.at("J3_e").value, 0.864273, 0.01, "J3_e");
  o.check_rel(nat.gram, 0.0948958, 0.01, "natural Gram");
  o.check(nat.gram > 0.0, "natural Gram sign (positive => inconclusive)");

  const auto& alt = get_cert("alt_" + std::to_string(2.0));
  o.check_rel(alt.ledger.at("Jcheck1_e").value, -3.770731, 0.01, "Jcheck1");

  const auto& fmr = get_cert("fmr_" + std::to_string(2.0));
  o.check_rel(fmr.ledger.at("Jhat1_e").value, 0.292551, 0.01, "Jhat1");
  bool before = o.pass;
  o.check_rel(fmr.ledger.at("Jhat2_e").value, 2.57656, 0.01, "Jhat2");
  o.check_rel(fmr.ledger.at("Jhat3_e").value, -1.27657, 0.01, "Jhat3");
  o.check_rel(fmr.gram, -0.339932, 0.01, "FMR Gram");
  if (before && !o.pass)
    o.notes.push_back(
        "note: no reading of the Zhat2 right-hand side reproduces the "
        "published Jhat2/Jhat3/Gram; values shown use Lambda^2 R. The "
        "categorical outcome (block positive) is unaffected.");
  return o;
}

Outcome criterion5() {
  Outcome o;
  o.check(get_cert("3d").verdict == "holds", "3d cubic verdict != holds");
  o.check(get_cert("nat_" + std::to_string(2.5)).verdict == "holds",
          "sigma=2.5 verdict != holds");
  o.check(get_cert("nat_" + std::to_string(3.0)).verdict == "holds",
          "sigma=3 verdict != holds");
  const auto& c21 = get_cert("nat_" + std::to_string(2.1));
  o.check(c21.verdict == "inconclusive", "sigma=2.1 verdict != inconclusive");
  o.check(c21.failing_block == "calLm_e", "sigma=2.1 failing block");
  o.check(c21.ledger.at("J1_e").value > 0.0, "sigma=2.1 J1_e not positive");
  o.check(get_cert("nat_" + std::to_string(2.0)).verdict == "inconclusive",
          "sigma=2 natural verdict != inconclusive");
  const auto& fmr = get_cert("fmr_" + std::to_string(2.0));
  bool lm_pos = false;
  for (const auto& b : fmr.blocks)
    if (b.name == "calLm_e") lm_pos = b.positive;
  o.check(lm_pos, "sigma=2 FMR calLm_e block not positive");
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto& fmr = get_cert("fmr_" + std::to_string(2.0));
  o.check(std::abs(fmr.ledger.at("Jhat1_e").value -
                   fmr.ledger.at("J1_e").value) < 1e-6,
          "Jhat1 != J1_e at sigma=2 (1e-6)");

  const auto& c3 = get_cert("3d");
  double g3 = cert::gram_reduce(c3.ledger.at("K1_k0").value,
                                c3.ledger.at("K2_k0").value,
                                c3.ledger.at("K3_k0").value);
  o.check_rel(g3, -5.22138, 0.001, "ledger Gram (3d)");
  const auto& nat = get_cert("nat_" + std::to_string(2.0));
  double gn = cert::gram_reduce(nat.ledger.at("J1_e").value,
                                nat.ledger.at("J2_e").value,
                                nat.ledger.at("J3_e").value);
  o.check_rel(gn, 0.0948958, 0.001, "ledger Gram (sigma=2 natural)");
  bool before = o.pass;
  double gf = cert::gram_reduce(fmr.ledger.at("Jhat1_e").value,
                                fmr.ledger.at("Jhat2_e").value,
                                fmr.ledger.at("Jhat3_e").value);
  o.check_rel(gf, -0.339932, 0.001, "ledger Gram (sigma=2 FMR)");
  if (before && !o.pass)
    o.notes.push_back(
        "note: consistent with the criterion-4 failure; the published "
        "Jhat2/Jhat3 could not be reproduced under any reading of the "
        "Zhat2 right-hand side.");

  for (double s : {0.5, 3.0}) {
    double scaled = cert::gram_reduce(c3.ledger.at("K1_k0").value,
                                      s * s * c3.ledger.at("K2_k0").value,
                                      s * c3.ledger.at("K3_k0").value);
    o.check(std::abs(scaled - g3) <= 1e-12 * std::abs(g3),
            "gram_reduce not invariant under phi2 rescaling");
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  for (double sig : kSigmas) {
    Problem prob{1, sig, 1.0};
    auto R = soliton::solve_ground_state(prob, {30.0, 1e-12});
    double sup = 0.0;
    for (int i = 0; i <= 600; ++i) {
      double x = 30.0 * i / 600;
      sup = std::max(sup, std::abs(R(x) - soliton::closed_form_1d(prob, x)));
    }
    std::ostringstream tag;
    tag << "sigma=" << sig;
    o.check(sup < 1e-9, tag.str() + " closed-form sup error >= 1e-9");
    o.check(std::abs(R.decay_slope + 1.0) < 1e-3, tag.str() + " decay slope");
  }
  auto R3 = soliton::solve_ground_state({3, 1.0, 1.0}, {40.0, 1e-12});
  o.check(R3.residual < 1e-10, "3d residual >= 1e-10");
  o.check(std::abs(R3.decay_slope + 1.0) < 1e-3, "3d decay slope");
  return o;
}

Outcome criterion8() {
  Outcome o;
  // Mourre bounds for the 3d cubic problem.
  const auto& c3 = get_cert("3d");
  o.check(std::isfinite(c3.mourre.C1) && c3.mourre.C1 > 0.0, "C1 not finite");
  if (c3.mourre.mu0_applicable)
    o.check(c3.mourre.mu0 > c3.prob.lambda, "mu0 <= lambda");
  else
    o.check(c3.mourre.C2 >= 1.0,
            "mu0 reported inapplicable but C2 < 1");  // explicit reporting
  o.check(c3.mourre.harmonic_applicable && c3.mourre.k_cutoff < 1000,
          "k_cutoff not finite");

  // Index monotonicity across every computed family.
  auto count = [&](const char* n) { return c3.indexes.at(n).count; };
  o.check(count("calLp_k0") >= count("calLp_k1") &&
              count("calLp_k1") >= count("calLp_k2"),
          "calLp family not monotone");
  o.check(count("calLm_k0") >= count("calLm_k1"),
          "calLm family not monotone");

  // Stability: tolerance halving and r_max + 25% keep every certified value
  // inside the criterion 2-4 tolerance bands around the baseline run.
  auto stable = [&](const std::string& key, const cert::Certificate& base,
                    double rel) {
    cert::CertifyOptions half, wide;
    half.tol = base.settings.tol / 2.0;
    wide.r_max = base.settings.r_max * 1.25;
    if (base.conditions != "natural") {
      half.conditions = base.conditions;
      wide.conditions = base.conditions;
    }
    for (const auto* opt : {&half, &wide}) {
      auto c = cert::certify(base.prob, *opt);
      o.check(c.verdict == base.verdict, key + ": verdict changed");
      for (const auto& [name, e] : base.ledger) {
        double v = c.ledger.at(name).value;
        o.check(std::abs(v - e.value) <= rel * std::abs(e.value),
                key + ": " + name + " moved beyond the tolerance band");
      }
      if (base.has_gram)
        o.check(std::abs(c.gram - base.gram) <= rel * std::abs(base.gram),
                key + ": Gram moved beyond the tolerance band");
      for (const auto& [name, r] : base.indexes)
        o.check(c.indexes.at(name).count == r.count,
                key + ": index changed for " + name);
    }
  };
  stable("3d", c3, 0.01);
  for (double sig : kSigmas)
    stable("sigma=" + std::to_string(sig),
           get_cert("nat_" + std::to_string(sig)), 0.005);
  stable("fmr", get_cert("fmr_" + std::to_string(2.0)), 0.01);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0) only = std::atoi(argv[i + 1]);

  Outcome (*fns[])() = {criterion1, criterion2, criterion3, criterion4,
                        criterion5, criterion6, criterion7, criterion8};
  const char* labels[] = {
      "index regression (exact integers)",
      "1d inner-product table (0.5%)",
      "3d cubic normalization-free values",
      "1d critical variants (1%)",
      "verdicts (exact categorical)",
      "internal consistency (derived oracles)",
      "soliton quality",
      "property suite (Mourre, monotonicity, stability)"};

  bool all_pass = true;
  for (int n = 1; n <= 8; ++n) {
    if (only != 0 && n != only) continue;
    Outcome o;
    try {
      o = fns[n - 1]();
    } catch (const Error& e) {
      o.pass = false;
      o.notes.push_back(std::string("fault in stage '") + e.stage + "': " +
                        e.what());
    }
    std::cout << "CRITERION " << n << ": " << (o.pass ? "PASS" : "FAIL")
              << " - " << labels[n - 1] << "\n";
    for (const auto& note : o.notes) std::cout << "    " << note << "\n";
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
