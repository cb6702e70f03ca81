#pragma once

// The acceptance suite: one check per criterion, each returning the measured
// quantities next to the pass/fail verdict.

#include <cstdint>
#include <string>
#include <vector>

#include "qabacus/oscillator.hpp"

namespace qabacus {

enum class VerifyLevel { quick, full };

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::quick;
  std::uint64_t seed = 20240917;
  /// Grid used wherever the grid engine runs at "default resolution".
  std::size_t grid_nodes = 2048;
  double x_max_lengths = 12.0;
  /// 0 selects tau / 2000.
  double dt = 0.0;
  /// Upper bound on criteria checked concurrently; 0 reads ABACUS_NUM_THREADS
  /// (unset: all available threads).
  int threads = 0;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string measured;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 9;

/// Throws std::out_of_range for ids outside 1..9.
CriterionResult check_criterion(int id, const VerifyOptions& options);

/// Runs the given criteria (all when empty) and returns them in id order.
std::vector<CriterionResult> run_verification(const VerifyOptions& options, std::vector<int> ids = {});

std::string format_result(const CriterionResult& r);

}  // namespace qabacus
