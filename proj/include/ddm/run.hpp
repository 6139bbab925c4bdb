#pragma once

// Run orchestration: mode dispatch, per-query fan-out and file emission.

#include "ddm/certify.hpp"
#include "ddm/config.hpp"
#include "ddm/report.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ddm::run {

struct Options {
  config::Mode mode = config::Mode::Certify;
  std::string out_prefix;                 // empty: config "output", else "ddm-lab-<mode>"
  std::optional<std::uint64_t> seed;      // overrides the config seed
  unsigned threads = 0;                   // 0: DDM_LAB_THREADS or hardware concurrency
};

/// Worker count from DDM_LAB_THREADS (clamped to >= 1), else the hardware count.
unsigned default_threads();

/// Certifier settings derived from a validated config.
cert::Settings settings_for(const config::RunConfig& cfg, std::uint64_t seed);

/// Builds the report for a mode. Output is independent of the thread count.
report::Report build_report(const config::RunConfig& cfg, config::Mode mode, std::uint64_t seed, unsigned threads);

struct Outcome {
  int exit_code = 0;  // 0 pass, 2 violated
  report::Report report;
  std::vector<std::string> files;
};

/// 2 when any claim is violated, else 0.
int exit_code_for(const report::Report& r);

/// Builds the report and writes <prefix>.json plus one CSV per scan.
Outcome execute(const config::RunConfig& cfg, const Options& opt);

/// CLI entry: loads the config, runs, prints a summary. Returns the exit code
/// (1 on configuration or runtime errors).
int main_entry(const std::string& mode, const std::string& config_path, const std::string& out_prefix,
               std::optional<std::uint64_t> seed, bool unsafe_large, std::ostream& out, std::ostream& err);

}  // namespace ddm::run
