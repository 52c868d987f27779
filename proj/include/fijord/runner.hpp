#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fijord/config.hpp"
#include "fijord/jordan.hpp"
#include "fijord/report.hpp"

namespace fijord {

/// Map-free suites (also called directly by tests).
std::vector<CheckResult> ring_axiom_checks(const RingZn& ring, const SampleBudget& budget);
std::vector<CheckResult> fi_axiom_checks(const FiContext& ctx, const SampleBudget& budget);
std::vector<CheckResult> restriction_calculus_checks(const FiContext& ctx,
                                                     const SampleBudget& budget);

/// Canonical suite order; requested suites always execute in this order.
const std::vector<std::string>& all_suite_names();
/// One line per suite: its name and the identity it certifies.
std::string list_suites_text();

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> cap;
  std::optional<std::uint32_t> samples;
  std::optional<std::string> report_path;
  bool decompose = false;  // also emit MAP/IDEMPOTENT lines; suite list fixed
};

struct RunOutcome {
  int exit_code = 0;  // 0 pass, 1 failed contract, 2 parse/construction, 3 hypothesis/cap
  std::string report;
};

/// Runs one instance: builds the context and the map, executes the
/// requested suites in canonical order, and renders the report (also
/// written to the configured report path, when any). Never throws for
/// config-level problems — they are encoded in the exit code and report.
RunOutcome run_instance(const InstanceConfig& cfg, const RunOptions& opt);
RunOutcome run_config_file(const std::string& path, const RunOptions& opt);

}  // namespace fijord
