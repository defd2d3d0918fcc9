#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "nls/report.hpp"

using namespace nls;

namespace {

struct CommonOpts {
  CLI::Option* problem = nullptr;
  CLI::Option* sigma = nullptr;
  CLI::Option* rmax = nullptr;
  CLI::Option* tol = nullptr;
  CLI::Option* conditions = nullptr;
  CLI::Option* out = nullptr;
};

CommonOpts add_common(CLI::App* sub, cli::RunConfig& cfg,
                      std::string& delta0_csv) {
  CommonOpts o;
  o.problem = sub->add_option("--problem", cfg.problem, "3d-cubic or 1d");
  o.sigma = sub->add_option("--sigma", cfg.sigma, "nonlinearity exponent (1d)");
  o.rmax =
      sub->add_option("--rmax", cfg.r_max, "working domain radius (0 = default)");
  o.tol = sub->add_option("--tol", cfg.tol, "solver tolerance");
  sub->add_option("--delta0", delta0_csv,
                  "comma-separated delta0 sweep, ascending");
  o.conditions = sub->add_option("--conditions", cfg.conditions,
                                 "natural | alternative | fmr (1d sigma=2 only)");
  o.out = sub->add_option("--out", cfg.out_dir, "output directory");
  return o;
}

void finalize(cli::RunConfig& cfg, const std::string& delta0_csv) {
  if (!delta0_csv.empty()) {
    cfg.delta0_sweep.clear();
    std::stringstream ss(delta0_csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
      cfg.delta0_sweep.push_back(std::stod(tok));
  }
  cfg.validate();
}

int fault(const Error& e) {
  std::cerr << "fault in stage '" << e.stage << "' [" << e.kind
            << "]: " << e.what() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral-property certification toolkit for NLS solitons"};
  app.require_subcommand(1);
  cli::RunConfig cfg;
  std::string delta0_csv;
  std::string config_file;
  app.add_option("--config", config_file,
                 "flat key=value config file (overridden by flags)");

  auto* sc_soliton = app.add_subcommand("soliton", "solve the ground state");
  auto* sc_index = app.add_subcommand("index", "per-block oscillation indexes");
  auto* sc_eig =
      app.add_subcommand("eigenmode", "3d cubic unstable eigenmode");
  auto* sc_certify = app.add_subcommand("certify", "full certification run");
  auto* sc_mourre = app.add_subcommand("mourre", "Mourre-type bounds");
  auto* sc_export = app.add_subcommand("export", "profile CSVs (cached run)");
  auto* sc_compare =
      app.add_subcommand("compare", "diff a certificate against a reference");
  std::vector<CommonOpts> opts;
  for (auto* s :
       {sc_soliton, sc_index, sc_eig, sc_certify, sc_mourre, sc_export})
    opts.push_back(add_common(s, cfg, delta0_csv));
  std::string cand, ref;
  sc_compare->add_option("candidate", cand, "candidate certificate JSON")
      ->required();
  sc_compare->add_option("reference", ref, "reference certificate JSON")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_file.empty()) {
      // File supplies the base; flags that were actually passed win.
      cli::RunConfig file_cfg = cli::RunConfig::from_file(config_file);
      auto passed = [&](CLI::Option* CommonOpts::*m) {
        for (const auto& o : opts)
          if ((o.*m)->count() > 0) return true;
        return false;
      };
      if (!passed(&CommonOpts::problem)) cfg.problem = file_cfg.problem;
      if (!passed(&CommonOpts::sigma)) cfg.sigma = file_cfg.sigma;
      if (!passed(&CommonOpts::rmax)) cfg.r_max = file_cfg.r_max;
      if (!passed(&CommonOpts::tol)) cfg.tol = file_cfg.tol;
      if (!passed(&CommonOpts::conditions)) cfg.conditions = file_cfg.conditions;
      if (!passed(&CommonOpts::out)) cfg.out_dir = file_cfg.out_dir;
      if (delta0_csv.empty()) cfg.delta0_sweep = file_cfg.delta0_sweep;
      cfg.cache_dir = file_cfg.cache_dir;
      cfg.use_cache = file_cfg.use_cache;
    }
    if (sc_compare->parsed()) {
      auto diffs = cli::compare_report_files(cand, ref);
      for (const auto& d : diffs) std::cout << "mismatch: " << d << "\n";
      std::cout << (diffs.empty() ? "match" : "differs") << "\n";
      return diffs.empty() ? 0 : 1;
    }
    finalize(cfg, delta0_csv);
    Problem prob = cfg.to_problem();

    if (sc_soliton->parsed()) {
      auto R = cli::obtain_soliton(cfg);
      std::cout << "problem " << cfg.problem << "  R(0) = " << R.b0
                << "  residual = " << R.residual
                << "  decay slope = " << R.decay_slope << "\n";
      return 0;
    }
    if (sc_index->parsed() || sc_eig->parsed() || sc_certify->parsed() ||
        sc_mourre->parsed()) {
      auto R = cli::obtain_soliton(cfg);
      if (sc_eig->parsed()) {
        ops::PotentialSet pot(R);
        auto em = bvp::solve_eigenmode(pot, cfg.tol);
        std::cout << "e_unstable = " << em.e_unstable
                  << "  phi1(0) = " << em.phi1_0
                  << "  matching residual = " << em.matching_residual << "\n";
        return 0;
      }
      if (sc_mourre->parsed()) {
        ops::PotentialSet pot(R);
        auto rep = mourre::evaluate(pot);
        std::cout << "C1 = " << rep.C1 << "  C2 = " << rep.C2 << "  mu0 = ";
        if (rep.mu0_applicable)
          std::cout << rep.mu0;
        else
          std::cout << "inapplicable (C2 >= 1)";
        if (prob.d == 3)
          std::cout << "  alpha0 = " << rep.alpha0
                    << "  k_cutoff = " << rep.k_cutoff;
        std::cout << "\n";
        return 0;
      }
      auto c = cert::certify(prob, cfg.to_options(), R);
      if (sc_index->parsed()) {
        for (const auto& [name, r] : c.indexes)
          std::cout << name << ": index " << r.count << "\n";
        std::cout << "delta0 = " << c.delta0 << "\n";
        return 0;
      }
      // certify
      std::filesystem::create_directories(cfg.out_dir);
      std::string path = cli::certificate_path(cfg);
      cli::write_json_atomic(path, c.to_json());
      std::cout << "verdict: " << c.verdict;
      if (!c.failing_block.empty())
        std::cout << "  (failing block " << c.failing_block << ")";
      std::cout << "\ncertificate: " << path << "\n";
      return 0;
    }
    if (sc_export->parsed()) {
      auto files = cli::emit_profiles(cfg);
      for (const auto& f : files) std::cout << f << "\n";
      return 0;
    }
  } catch (const Error& e) {
    return fault(e);
  } catch (const std::exception& e) {
    std::cerr << "fault: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
