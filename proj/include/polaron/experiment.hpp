#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "polaron/config.hpp"

namespace polaron {

// Outcome of one experiment subcommand: summary lines for stdout, a JSON
// report, and named CSV payloads. `pass` reflects the subcommand's built-in
// assertions (exit code 2 when false).
struct ExperimentResult {
  bool pass = true;
  std::vector<std::string> lines;
  nlohmann::json report;
  std::map<std::string, std::string> csv;  // filename -> contents

  void note(const std::string& line) { lines.push_back(line); }
  void assertThat(const std::string& name, bool ok, const std::string& detail);
};

// 17-significant-digit scientific formatting; round-trips doubles exactly.
std::string csv_num(double v);

ExperimentResult run_spectral(const Config& cfg, std::uint64_t seed);
ExperimentResult run_recursion(const Config& cfg, std::uint64_t seed);
ExperimentResult run_mcmc(const Config& cfg, std::uint64_t seed);
ExperimentResult run_gci(const Config& cfg, std::uint64_t seed);
ExperimentResult run_decompose(const Config& cfg, std::uint64_t seed);
ExperimentResult run_oracle_check(const Config& cfg, std::uint64_t seed);

// Dispatch by subcommand name; throws std::invalid_argument for unknown names.
ExperimentResult run_subcommand(const std::string& name, const Config& cfg,
                                std::uint64_t seed);

// Reproducibility manifest: everything needed to re-run the experiment and
// compare CSV output bitwise.
nlohmann::json make_manifest(const std::string& subcommand, const Config& cfg,
                             std::uint64_t seed, double wallSeconds,
                             const std::vector<std::string>& cmdline);

}  // namespace polaron
