#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace covalg {

/// One verification check inside a tool report. The certificate carries the
/// evidence behind the verdict (dimensions, integer matrices, bounds) as
/// plain text so reports stay diffable.
struct CheckResult {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  std::string certificate;
};

/// Machine-readable outcome of one tool invocation. Serialization is
/// deterministic: checks are emitted sorted by name and all numbers are
/// formatted identically on every run, so a report depends only on the
/// input description, the seed, and the tool version.
struct Report {
  std::string command;
  std::string input;
  std::string fingerprint;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  void add(std::string name, bool pass, double residual, std::string certificate = "");
  bool ok() const;

  std::string to_json() const;
  std::string to_pretty() const;
};

/// Reported by every tool and embedded in every report.
extern const char* const kToolVersion;

}  // namespace covalg
