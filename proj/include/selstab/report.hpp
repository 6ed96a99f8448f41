#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "selstab/census.hpp"
#include "selstab/frobenius.hpp"
#include "selstab/gl2.hpp"
#include "selstab/levels.hpp"
#include "selstab/omega.hpp"
#include "selstab/stability.hpp"

namespace selstab {

enum class ReportFormat { Csv, Json };

struct RunConfig {
  ResidualRepSpec spec;
  std::uint64_t max_level = 0;             // X
  std::vector<std::uint64_t> checkpoints;  // empty = derive from max_level
  std::uint32_t density_max_p = kDefaultDensityMaxP;
  double band = 2.0;
  ReportFormat format = ReportFormat::Csv;
  std::string out_path;  // empty = stdout
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const;
};

// Ordered key=value view of a flat config file; '#' starts a comment.
std::map<std::string, std::string> parse_kv_file(const std::string& path);

// Unsigned count with optional scientific shorthand: "909", "1e6", "25e2".
std::uint64_t parse_count(const std::string& text);

// Builds the representation spec from parsed keys (p, n_rho_bar, curve or
// trace_table, surjective, pointcount_bound, kernel). Unknown keys are left
// for the caller; paths are resolved relative to the file's directory.
ResidualRepSpec spec_from_kv(const std::map<std::string, std::string>& kv,
                             const std::string& base_dir);

RunConfig config_from_file(const std::string& path);

struct ConsistencyCheck {
  std::string name;
  bool ok = false;
};

// Everything a run produces, assembled before any rendering so csv and json
// views agree. Rendering uses fixed 6-digit decimals; nothing in the document
// depends on wall time or thread count.
struct ReportDocument {
  std::vector<std::pair<std::string, std::string>> config;
  DensityReport density;
  OmegaSieve sieve;
  DensityEstimate estimate;
  CensusCurve census;
  AdmissibleEnumeration admissible;
  std::uint64_t lower_bound = 0;
  std::uint64_t cofactor_bound = 0;
  std::vector<StabilityVerdict> certificates;
  std::vector<ConsistencyCheck> checks;

  std::string to_csv() const;
  std::string to_json() const;
  std::string render(ReportFormat f) const;
};

// Runs the full pipeline: density identity, omega sieve to max_level /
// n_rho_bar, census ratios, admissible levels, newform lower bound,
// certificates for every census level, cross-checks. Any stage error is
// rethrown with the stage name prefixed; no partial document is returned.
ReportDocument run_report(const RunConfig& config);

}  // namespace selstab
