#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nls/report.hpp"

using namespace nls;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static fs::path p = [] {
    fs::path q = fs::temp_directory_path() / "nlscert_test_report";
    fs::remove_all(q);
    fs::create_directories(q);
    return q;
  }();
  return p;
}

cli::RunConfig base_config(const std::string& problem, double sigma) {
  cli::RunConfig cfg;
  cfg.problem = problem;
  cfg.sigma = sigma;
  cfg.out_dir = (scratch() / "out").string();
  cfg.cache_dir = (scratch() / "cache").string();
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("pipeline output matches the reference fixtures") {
  struct Case {
    std::string problem;
    double sigma;
    std::string fixture;
  };
  const Case cases[] = {
      {"3d-cubic", 1.0, "tests/fixtures/certificate_3d-cubic.json"},
      {"1d", 2.0, "tests/fixtures/certificate_1d-sigma2.json"},
      {"1d", 2.1, "tests/fixtures/certificate_1d-sigma2.1.json"},
      {"1d", 2.5, "tests/fixtures/certificate_1d-sigma2.5.json"},
      {"1d", 3.0, "tests/fixtures/certificate_1d-sigma3.json"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.fixture);
    auto cfg = base_config(c.problem, c.sigma);
    std::string path = cli::run_pipeline(cfg);
    auto diffs = cli::compare_report_files(path, c.fixture);
    for (const auto& d : diffs) MESSAGE(d);
    CHECK(diffs.empty());
  }
}

TEST_CASE("determinism: identical configs give identical certificates") {
  auto cfg = base_config("1d", 2.5);
  std::string a = cli::run_pipeline(cfg);
  std::string sa = slurp(a);
  fs::remove(a);
  std::string b = cli::run_pipeline(cfg);
  CHECK(sa == slurp(b));
}

TEST_CASE("cache soundness: cached soliton changes no ledger value") {
  auto cfg = base_config("1d", 3.0);
  soliton::Profile cached = cli::obtain_soliton(cfg);  // populates the cache
  soliton::Profile fresh =
      soliton::solve_ground_state(cfg.to_problem(), {30.0, cfg.tol});
  soliton::Profile reload = cli::obtain_soliton(cfg);  // cache hit
  CHECK(reload.b0 == cached.b0);
  CHECK(reload.traj.steps.size() == cached.traj.steps.size());

  auto lc = cert::certify(cfg.to_problem(), cfg.to_options(), reload).ledger;
  auto lf = cert::certify(cfg.to_problem(), cfg.to_options(), fresh).ledger;
  for (const auto& [name, e] : lf)
    CHECK(std::abs(lc.at(name).value - e.value) <= 1e-9 * std::abs(e.value));
}

TEST_CASE("profile export layout") {
  auto cfg = base_config("1d", 2.5);
  cli::obtain_soliton(cfg);  // ensure the cache exists
  auto files = cli::emit_profiles(cfg);
  CHECK(files.size() >= 10);

  // Header and monotone soliton column.
  std::ifstream sol(cfg.out_dir + "/soliton_1d-sigma2.5.csv");
  std::string line;
  std::getline(sol, line);
  CHECK(line == "r,value,derivative");
  double prev = 1e300;
  int rows = 0;
  while (std::getline(sol, line)) {
    double r, v, d;
    char c;
    std::istringstream(line) >> r >> c >> v >> c >> d;
    CHECK(v < prev + 1e-15);
    if (r > 0) CHECK(d <= 1e-15);
    prev = v;
    ++rows;
  }
  CHECK(rows == 2001);

  // The even L+ index trajectory shows exactly one sign change.
  std::ifstream idxcsv(cfg.out_dir + "/index_calLp_e_1d-sigma2.5.csv");
  std::getline(idxcsv, line);
  int flips = 0;
  double last = 0.0;
  while (std::getline(idxcsv, line)) {
    double r, v, d;
    char c;
    std::istringstream(line) >> r >> c >> v >> c >> d;
    if (last != 0.0 && v * last < 0.0) ++flips;
    if (v != 0.0) last = v;
  }
  CHECK(flips == 1);

  // kappa accumulation flat over the final 20%.
  std::ifstream kap(cfg.out_dir + "/kappa_K1_e_1d-sigma2.5.csv");
  std::getline(kap, line);
  std::vector<std::pair<double, double>> curve;
  while (std::getline(kap, line)) {
    double r, v, d;
    char c;
    std::istringstream(line) >> r >> c >> v >> c >> d;
    curve.push_back({r, v});
  }
  double final_v = curve.back().second;
  for (const auto& [r, v] : curve)
    if (r > 0.8 * curve.back().first)
      CHECK(std::abs(v - final_v) < 1e-6 * std::abs(final_v));
}

TEST_CASE("export without a cached run is refused") {
  auto cfg = base_config("1d", 2.1);
  cfg.cache_dir = (scratch() / "empty_cache").string();
  CHECK_THROWS_AS(cli::emit_profiles(cfg), MissingCache);
}

TEST_CASE("comparison semantics") {
  nlohmann::json ref = {{"verdict", "holds"},
                        {"value", 1.0},
                        {"_tolerances", {{"value", 0.01}}}};
  nlohmann::json same = {{"verdict", "holds"}, {"value", 1.005}};
  CHECK(cli::compare_reports(same, ref).empty());

  nlohmann::json off = {{"verdict", "holds"}, {"value", 1.02}};
  CHECK(cli::compare_reports(off, ref).size() == 1);

  nlohmann::json flipped = {{"verdict", "inconclusive"}, {"value", 1.0}};
  CHECK(cli::compare_reports(flipped, ref).size() == 1);

  nlohmann::json missing = {{"verdict", "holds"}};
  CHECK_THROWS_AS(cli::compare_reports(missing, ref), SchemaMismatch);
}

TEST_CASE("config file round trip") {
  fs::path p = scratch() / "run.cfg";
  {
    std::ofstream out(p);
    out << "# regression run\n"
        << "schema_version = 1\n"
        << "problem = 1d\n"
        << "sigma = 2.1\n"
        << "tol = 1e-11\n"
        << "delta0_sweep = 1e-6,1e-4\n"
        << "out_dir = " << (scratch() / "cfg_out").string() << "\n";
  }
  auto cfg = cli::RunConfig::from_file(p.string());
  CHECK(cfg.problem == "1d");
  CHECK(cfg.sigma == 2.1);
  CHECK(cfg.tol == 1e-11);
  REQUIRE(cfg.delta0_sweep.size() == 2);
  CHECK(cfg.delta0_sweep[1] == 1e-4);

  fs::path bad = scratch() / "bad.cfg";
  std::ofstream(bad.string()) << "problem = 1d\n";
  CHECK_THROWS_AS(cli::RunConfig::from_file(bad.string()), SchemaMismatch);
  std::ofstream(bad.string()) << "schema_version = 1\nwhatever = 3\n";
  CHECK_THROWS_AS(cli::RunConfig::from_file(bad.string()), InvalidConfig);
}

TEST_CASE("cache directory falls back to the environment variable") {
  auto cfg = base_config("1d", 2.5);
  cfg.cache_dir.clear();
  fs::path env_cache = scratch() / "env_cache";
  setenv("NLSCERT_CACHE_DIR", env_cache.string().c_str(), 1);
  CHECK(cli::resolve_cache_dir(cfg) == env_cache.string());
  cli::obtain_soliton(cfg);
  CHECK(fs::exists(env_cache / "soliton_1d-sigma2.5_rmax30_tol1e-12.json"));
  unsetenv("NLSCERT_CACHE_DIR");
  CHECK(cli::resolve_cache_dir(cfg).empty());
}
