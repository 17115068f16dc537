#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gwt {

inline constexpr const char* kVersion = "1.0.0";

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Exhaustive checks over every ordered tree with at most max_n nodes:
/// evaluators against the integer oracle, scan against DP, the explicit
/// cut-off bounds and the eta recursion.
std::vector<CheckResult> run_selftest(std::uint32_t max_n = 9);

}  // namespace gwt
