#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "nls/bvp.hpp"
#include "nls/index.hpp"
#include "nls/mourre.hpp"

namespace nls::cert {

// One certified inner product with its provenance.
struct LedgerEntry {
  double value = 0.0;
  std::string op;   // operator descriptor
  std::string rhs;  // right-hand-side descriptor
  double delta0 = 0.0, r_max = 0.0, tol = 0.0;
  bool stabilized = false;
};

using Ledger = std::map<std::string, LedgerEntry>;

// Per-block decision: index 0 => positive outright; index 1 with one
// orthogonality condition => positive iff value < 0; index 1 with two
// conditions => positive iff the Gram reduction < 0.
struct BlockVerdict {
  std::string name;
  int index = 0;
  std::string rule;  // "index0" | "single_condition" | "gram"
  double value = 0.0;
  bool positive = false;
};

// theta_star / final_delta margins, kept in log space: the weighted
// potential sup (|calV+| + |calV-|) e^{r^2} overflows double on the
// certification grid, and final_delta underflows symmetrically.
struct BoundInfo {
  double log_theta_star = 0.0;
  double log_final_delta = 0.0;
  bool final_delta_positive = false;
};

struct EigenInfo {
  bool present = false;
  double e_unstable = 0.0, phi1_0 = 0.0;
  double K2_paper = 0.0, K3_paper = 0.0;  // phi1(0) = 1 normalization
  double matching_residual = 0.0;
};

struct Certificate {
  Problem prob;
  std::string conditions = "natural";
  SolverSettings settings;
  std::vector<double> delta0_sweep;
  std::map<std::string, idx::IndexResult> indexes;
  double delta0 = 0.0;
  Ledger ledger;
  bool has_gram = false;
  double gram = 0.0;
  EigenInfo eigenmode;
  mourre::MourreReport mourre;
  BoundInfo bound;
  std::vector<BlockVerdict> blocks;
  std::string verdict;  // "holds" | "inconclusive"
  std::string failing_block;

  nlohmann::json to_json() const;
};

double gram_reduce(double K1, double K2, double K3);

void compose_bound(double delta0, const ops::PotentialSet& pot, double r_max,
                   BoundInfo& out);

struct CertifyOptions {
  double r_max = 0.0;  // 0 = dimension default
  double tol = 1e-12;
  std::vector<double> delta0_sweep = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
  std::string conditions = "natural";  // natural | alternative | fmr
};

Certificate certify(const Problem& prob, const CertifyOptions& opt = {});

// Variant with a precomputed ground state (cache path); R must solve prob
// on a domain covering the configured r_max.
Certificate certify(const Problem& prob, const CertifyOptions& opt,
                    const soliton::Profile& R);

}  // namespace nls::cert
