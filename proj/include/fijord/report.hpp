#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fijord/ring.hpp"

namespace fijord {

/// Outcome of one verified identity. `witness` is empty on success and
/// carries a concrete counterexample (inputs and both sides) on failure.
struct CheckResult {
  std::string name;
  bool passed = true;
  std::string witness;
};

/// Informational classification line (e.g. whether a map happens to be
/// multiplicative). Verdicts never affect the pass/fail outcome.
struct VerdictLine {
  std::string name;
  std::string value;
};

std::string coords_text(const std::vector<Residue>& coords);

/// Accumulates a deterministic plain-text report: header lines, CHECK and
/// VERDICT lines in insertion order, and a RESULT footer. No timestamps,
/// no addresses, no locale dependence — identical inputs give identical
/// bytes.
class ReportBuilder {
 public:
  void header(const std::string& key, const std::string& value);
  void note(const std::string& text);
  void add(const CheckResult& check);
  void add_all(const std::vector<CheckResult>& checks);
  void verdict(const VerdictLine& verdict);
  void verdict(const std::string& name, const std::string& value);
  /// Marks the run as aborted (construction error, violated hypothesis);
  /// the footer then reads "RESULT ERROR <text>" regardless of checks.
  void abort(const std::string& text);

  std::size_t check_count() const { return checks_; }
  std::size_t failed_count() const { return failed_; }
  bool all_passed() const { return failed_ == 0; }

  std::string render() const;

 private:
  std::vector<std::string> lines_;
  std::string abort_;
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
};

}  // namespace fijord
