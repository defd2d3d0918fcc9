#include "nls/report.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace nls::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using ops::Sign;

namespace {

std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string problem_tag(const RunConfig& cfg) {
  return cfg.problem == "3d-cubic" ? "3d-cubic" : "1d-sigma" + fmt_g(cfg.sigma);
}

json traj_to_json(const ivp::Trajectory& t) {
  json steps = json::array();
  for (const auto& s : t.steps)
    steps.push_back({s.t0, s.t1, s.y0, s.y1, s.f0, s.f1});
  return {{"dim", t.dim},
          {"n_accepted", t.n_accepted},
          {"n_rejected", t.n_rejected},
          {"n_evals", t.n_evals},
          {"event_fired", t.event_fired},
          {"steps", steps}};
}

ivp::Trajectory traj_from_json(const json& j) {
  ivp::Trajectory t;
  t.dim = j.at("dim");
  t.n_accepted = j.at("n_accepted");
  t.n_rejected = j.at("n_rejected");
  t.n_evals = j.at("n_evals");
  t.event_fired = j.at("event_fired");
  for (const auto& s : j.at("steps")) {
    ivp::Step st;
    st.t0 = s.at(0);
    st.t1 = s.at(1);
    st.y0 = s.at(2).get<std::vector<double>>();
    st.y1 = s.at(3).get<std::vector<double>>();
    st.f0 = s.at(4).get<std::vector<double>>();
    st.f1 = s.at(5).get<std::vector<double>>();
    t.steps.push_back(std::move(st));
  }
  return t;
}

json profile_to_json(const soliton::Profile& R) {
  return {{"problem",
           {{"d", R.prob.d}, {"sigma", R.prob.sigma}, {"lambda", R.prob.lambda}}},
          {"b0", R.b0},
          {"r_max", R.r_max},
          {"t_splice", R.t_splice},
          {"tail_c", R.tail_c},
          {"tol", R.tol},
          {"residual", R.residual},
          {"decay_slope", R.decay_slope},
          {"traj", traj_to_json(R.traj)}};
}

soliton::Profile profile_from_json(const json& j) {
  soliton::Profile R;
  R.prob = {j.at("problem").at("d"), j.at("problem").at("sigma"),
            j.at("problem").at("lambda")};
  R.b0 = j.at("b0");
  R.r_max = j.at("r_max");
  R.t_splice = j.at("t_splice");
  R.tail_c = j.at("tail_c");
  R.tol = j.at("tol");
  R.residual = j.at("residual");
  R.decay_slope = j.at("decay_slope");
  R.traj = traj_from_json(j.at("traj"));
  return R;
}

std::string cache_file(const RunConfig& cfg, const std::string& dir) {
  double r_max = cfg.r_max > 0.0
                     ? cfg.r_max
                     : default_rmax(cfg.problem == "3d-cubic" ? 3 : 1);
  return dir + "/soliton_" + problem_tag(cfg) + "_rmax" + fmt_g(r_max) +
         "_tol" + fmt_g(cfg.tol) + ".json";
}

void write_csv(const std::string& path,
               const std::vector<std::array<double, 3>>& rows) {
  std::ofstream out(path);
  out.precision(17);
  out << "r,value,derivative\n";
  for (const auto& row : rows)
    out << row[0] << ',' << row[1] << ',' << row[2] << '\n';
}

void compare_walk(const json& cand, const json& ref, const std::string& path,
                  const json& tols, double def_tol,
                  std::vector<std::string>& diffs) {
  if (ref.is_object()) {
    if (!cand.is_object())
      throw SchemaMismatch("compare", "expected object at " + path);
    for (auto it = ref.begin(); it != ref.end(); ++it) {
      if (it.key() == "_tolerances") continue;
      std::string sub = path.empty() ? it.key() : path + "." + it.key();
      if (!cand.contains(it.key()))
        throw SchemaMismatch("compare", "candidate missing field " + sub);
      compare_walk(cand.at(it.key()), it.value(), sub, tols, def_tol, diffs);
    }
  } else if (ref.is_array()) {
    if (!cand.is_array() || cand.size() != ref.size())
      throw SchemaMismatch("compare", "array shape mismatch at " + path);
    for (std::size_t i = 0; i < ref.size(); ++i)
      compare_walk(cand.at(i), ref.at(i), path + "." + std::to_string(i), tols,
                   def_tol, diffs);
  } else if (ref.is_number() && !ref.is_number_integer()) {
    if (!cand.is_number())
      throw SchemaMismatch("compare", "expected number at " + path);
    double a = cand.get<double>(), b = ref.get<double>();
    double tol = tols.contains(path) ? tols.at(path).get<double>() : def_tol;
    double scale = std::max(std::abs(a), std::abs(b));
    if (std::abs(a - b) > tol * scale && std::abs(a - b) > 1e-12)
      diffs.push_back(path + ": " + std::to_string(a) + " vs " +
                      std::to_string(b));
  } else {
    // Integers, booleans, strings, null: exact.
    if (cand != ref)
      diffs.push_back(path + ": " + cand.dump() + " vs " + ref.dump());
  }
}

}  // namespace

Problem RunConfig::to_problem() const {
  if (problem == "3d-cubic") return {3, 1.0, 1.0};
  if (problem == "1d") return {1, sigma, 1.0};
  throw InvalidConfig("config", "unknown problem selector: " + problem);
}

cert::CertifyOptions RunConfig::to_options() const {
  return {r_max, tol, delta0_sweep, conditions};
}

void RunConfig::validate() const {
  Problem prob = to_problem();
  prob.validate();
  if (!(tol >= 1e-13 && tol <= 1e-8))
    throw InvalidConfig("config", "tol must lie in [1e-13, 1e-8]");
  if (conditions != "natural" && conditions != "alternative" &&
      conditions != "fmr")
    throw InvalidConfig("config", "unknown condition set: " + conditions);
  if (conditions != "natural" && !prob.critical1d())
    throw InvalidConfig("config", "condition set '" + conditions +
                                      "' only applies to 1d sigma=2");
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("config", "cannot open config file " + path);
  RunConfig cfg;
  bool versioned = false;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      auto e = s.find_last_not_of(" \t\r");
      s.erase(e == std::string::npos ? 0 : e + 1);
      return s;
    };
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key == "schema_version") {
      if (val != "1")
        throw SchemaMismatch("config", "unsupported schema_version " + val);
      versioned = true;
    } else if (key == "problem") {
      cfg.problem = val;
    } else if (key == "sigma") {
      cfg.sigma = std::stod(val);
    } else if (key == "r_max") {
      cfg.r_max = std::stod(val);
    } else if (key == "tol") {
      cfg.tol = std::stod(val);
    } else if (key == "conditions") {
      cfg.conditions = val;
    } else if (key == "out_dir") {
      cfg.out_dir = val;
    } else if (key == "cache_dir") {
      cfg.cache_dir = val;
    } else if (key == "use_cache") {
      cfg.use_cache = (val == "true" || val == "1");
    } else if (key == "delta0_sweep") {
      cfg.delta0_sweep.clear();
      std::stringstream ss(val);
      std::string tok;
      while (std::getline(ss, tok, ',')) cfg.delta0_sweep.push_back(std::stod(tok));
    } else {
      throw InvalidConfig("config", "unknown config key: " + key);
    }
  }
  if (!versioned)
    throw SchemaMismatch("config", "config file lacks schema_version");
  cfg.validate();
  return cfg;
}

std::string resolve_cache_dir(const RunConfig& cfg) {
  if (!cfg.cache_dir.empty()) return cfg.cache_dir;
  const char* env = std::getenv("NLSCERT_CACHE_DIR");
  return env ? env : "";
}

void write_json_atomic(const std::string& path, const json& j) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    out << j.dump(2) << '\n';
  }
  fs::rename(tmp, path);
}

soliton::Profile obtain_soliton(const RunConfig& cfg) {
  Problem prob = cfg.to_problem();
  double r_max = cfg.r_max > 0.0 ? cfg.r_max : default_rmax(prob.d);
  std::string dir = resolve_cache_dir(cfg);
  std::string file = dir.empty() ? "" : cache_file(cfg, dir);
  if (cfg.use_cache && !file.empty() && fs::exists(file)) {
    std::ifstream in(file);
    json j;
    in >> j;
    soliton::Profile R = profile_from_json(j);
    if (R.prob.d == prob.d && R.prob.sigma == prob.sigma &&
        R.prob.lambda == prob.lambda && R.r_max == r_max && R.tol == cfg.tol)
      return R;
  }
  soliton::Profile R = soliton::solve_ground_state(prob, {r_max, cfg.tol});
  if (cfg.use_cache && !file.empty()) {
    fs::create_directories(dir);
    write_json_atomic(file, profile_to_json(R));
  }
  return R;
}

std::string certificate_path(const RunConfig& cfg) {
  std::string name = "certificate_" + problem_tag(cfg);
  if (cfg.conditions != "natural") name += "_" + cfg.conditions;
  return cfg.out_dir + "/" + name + ".json";
}

std::string run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  soliton::Profile R = obtain_soliton(cfg);
  cert::Certificate c = cert::certify(cfg.to_problem(), cfg.to_options(), R);
  fs::create_directories(cfg.out_dir);
  std::string path = certificate_path(cfg);
  write_json_atomic(path, c.to_json());
  return path;
}

std::vector<std::string> emit_profiles(const RunConfig& cfg) {
  cfg.validate();
  Problem prob = cfg.to_problem();
  double r_max = cfg.r_max > 0.0 ? cfg.r_max : default_rmax(prob.d);
  std::string dir = resolve_cache_dir(cfg);
  if (dir.empty() || !cfg.use_cache || !fs::exists(cache_file(cfg, dir)))
    throw MissingCache("export",
                       "no cached soliton for this configuration; run the "
                       "certify pipeline first (set NLSCERT_CACHE_DIR)");
  soliton::Profile R = obtain_soliton(cfg);
  ops::PotentialSet pot(R);
  fs::create_directories(cfg.out_dir);
  std::string tag = problem_tag(cfg);
  std::vector<std::string> written;
  auto emit = [&](const std::string& stem,
                  const std::vector<std::array<double, 3>>& rows) {
    std::string path = cfg.out_dir + "/" + stem + "_" + tag + ".csv";
    write_csv(path, rows);
    written.push_back(path);
  };

  const int n = 2000;
  std::vector<std::array<double, 3>> rows;
  for (int i = 0; i <= n; ++i) {
    double r = r_max * i / n;
    rows.push_back({r, R(r), R.deriv(r)});
  }
  emit("soliton", rows);

  rows.clear();
  auto bc = soliton::check_artificial_bc(R);
  for (std::size_t i = 0; i < bc.size(); ++i) {
    double d = 0.0;
    if (i > 0 && i + 1 < bc.size())
      d = (bc[i + 1].second - bc[i - 1].second) /
          (bc[i + 1].first - bc[i - 1].first);
    rows.push_back({bc[i].first, bc[i].second, d});
  }
  emit("bc_mismatch", rows);

  // Index trajectories for the certified block set.
  struct Spec {
    std::string name;
    Sign sign;
    ops::Block block;
  };
  std::vector<Spec> specs;
  if (prob.d == 3) {
    specs = {{"calLp_k0", Sign::plus, {0, false}},
             {"calLp_k1", Sign::plus, {1, false}},
             {"calLp_k2", Sign::plus, {2, false}},
             {"calLm_k0", Sign::minus, {0, false}},
             {"calLm_k1", Sign::minus, {1, false}}};
  } else {
    specs = {{"calLp_e", Sign::plus, {0, false}},
             {"calLm_e", Sign::minus, {0, false}},
             {"calLp_o", Sign::plus, {0, true}},
             {"calLm_o", Sign::minus, {0, true}}};
  }
  for (const auto& s : specs) {
    auto op = ops::commutator_operator(pot, s.sign, s.block);
    if (prob.d == 3 && s.block.k >= 1) op = ops::regularize(op);
    auto traj = idx::distinguished_trajectory(op, r_max, cfg.tol);
    rows.clear();
    for (int i = 0; i <= n; ++i) {
      double r = traj.t_begin() + (r_max - traj.t_begin()) * i / n;
      rows.push_back({r, traj.eval(r, 0), traj.eval(r, 1)});
    }
    emit("index_" + s.name, rows);
  }

  // Basic ledger BVPs with their kappa accumulation curves.
  struct BvpSpec {
    std::string name;
    Sign sign;
    ops::Block block;
    bvp::Fn f;
  };
  std::vector<BvpSpec> bvps;
  bvp::Fn fR = [&R](double r) { return R(r); };
  if (prob.d == 3) {
    bvps.push_back({"K1_k0", Sign::plus, {0, false}, fR});
    bvps.push_back({"J1_k0", Sign::minus, {0, false},
                    [&R](double r) { return R(r) + r * R.deriv(r); }});
  } else {
    double sig = prob.sigma;
    bvps.push_back({"K1_e", Sign::plus, {0, false}, fR});
    bvps.push_back({"J1_e", Sign::minus, {0, false},
                    [&R, sig](double x) { return R(x) / sig + x * R.deriv(x); }});
    bvps.push_back({"K1_o", Sign::plus, {0, true},
                    [&R](double x) { return x * R(x); }});
  }
  for (const auto& s : bvps) {
    auto op = ops::commutator_operator(pot, s.sign, s.block);
    auto u = bvp::solve_linear_bvp(op, s.f, r_max, cfg.tol, {s.f});
    rows.clear();
    std::vector<std::array<double, 3>> krows;
    for (int i = 0; i <= n; ++i) {
      double r = u.r_begin + (r_max - u.r_begin) * i / n;
      rows.push_back({r, u(r), u.deriv(r)});
      double w = prob.d == 3 ? r * r : 1.0;
      krows.push_back({r, u.ip_curve(r, 0), s.f(r) * u(r) * w});
    }
    emit("bvp_" + s.name, rows);
    write_csv(cfg.out_dir + "/kappa_" + s.name + "_" + tag + ".csv", krows);
    written.push_back(cfg.out_dir + "/kappa_" + s.name + "_" + tag + ".csv");
  }
  return written;
}

std::vector<std::string> compare_reports(const json& candidate,
                                         const json& reference) {
  json tols = reference.contains("_tolerances") ? reference.at("_tolerances")
                                                : json::object();
  std::vector<std::string> diffs;
  compare_walk(candidate, reference, "", tols, 1e-6, diffs);
  return diffs;
}

std::vector<std::string> compare_report_files(const std::string& candidate,
                                              const std::string& reference) {
  auto load = [](const std::string& p) {
    std::ifstream in(p);
    if (!in) throw SchemaMismatch("compare", "cannot open " + p);
    json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw SchemaMismatch("compare", "cannot parse " + p + ": " + e.what());
    }
    return j;
  };
  return compare_reports(load(candidate), load(reference));
}

}  // namespace nls::cli
