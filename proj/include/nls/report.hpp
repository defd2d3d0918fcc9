#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "nls/certificate.hpp"

namespace nls::cli {

// Flat run configuration; file form is "key = value" lines with a
// schema_version field.
struct RunConfig {
  std::string problem = "3d-cubic";  // "3d-cubic" | "1d"
  double sigma = 2.0;                // 1d only
  double r_max = 0.0;                // 0 = dimension default
  double tol = 1e-12;
  std::vector<double> delta0_sweep = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
  std::string conditions = "natural";
  std::string out_dir = ".";
  std::string cache_dir;  // empty = $NLSCERT_CACHE_DIR, else caching off
  bool use_cache = true;

  Problem to_problem() const;
  cert::CertifyOptions to_options() const;
  void validate() const;

  static RunConfig from_file(const std::string& path);
};

// Resolved cache directory: explicit field, else $NLSCERT_CACHE_DIR, else
// empty (caching disabled).
std::string resolve_cache_dir(const RunConfig& cfg);

// Ground state, reusing the cache when enabled; steps are serialized
// round-trip exactly, so a cache hit reproduces the fresh profile bitwise.
soliton::Profile obtain_soliton(const RunConfig& cfg);

// Write JSON atomically (temp file + rename).
void write_json_atomic(const std::string& path, const nlohmann::json& j);

// Full pipeline; returns the certificate file path.
std::string run_pipeline(const RunConfig& cfg);

std::string certificate_path(const RunConfig& cfg);

// CSV export (columns r, value, derivative) for the soliton, the BC-mismatch
// curve, the index trajectories, and the ledger BVP solutions with their
// kappa accumulation curves.  Requires a cached soliton.
std::vector<std::string> emit_profiles(const RunConfig& cfg);

// Walk the reference JSON (skipping "_tolerances"), compare against the
// candidate: numbers to per-field relative tolerance, everything else
// exactly.  A field missing from the candidate is a schema mismatch.
std::vector<std::string> compare_reports(const nlohmann::json& candidate,
                                         const nlohmann::json& reference);
std::vector<std::string> compare_report_files(const std::string& candidate,
                                              const std::string& reference);

}  // namespace nls::cli
