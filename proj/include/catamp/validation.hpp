#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace catamp {

struct CheckResult {
  std::string name;
  bool passed = false;
  double deviation = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct OracleCheckOptions {
  std::uint64_t seed_base = 12345;
  int workers = 1;
  std::size_t mcwf_trajectories = 4000;
};

/// Cross-checks the fast propagators against the brute-force oracles at small N.
/// A check that throws is reported as failed with the message in `detail`.
std::vector<CheckResult> run_oracle_checks(const OracleCheckOptions& options);

}  // namespace catamp
