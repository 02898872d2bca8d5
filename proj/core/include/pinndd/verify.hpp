#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pinndd/problems.hpp"

namespace pinndd {

struct CheckResult {
  std::string name;
  double tolerance = 0;
  double observed = 0;
  bool passed = false;
};

/// Full oracle suite: RNG known answers, finite-difference derivative and
/// gradient checks, exact-solution consistency on every benchmark, tilde
/// reconstruction identities, communication schedule counts, determinism and
/// zero-rate reduction.
std::vector<CheckResult> verify_all();

std::vector<CheckResult> verify_rng();
std::vector<CheckResult> verify_derivative_oracle(int instances = 100);
std::vector<CheckResult> verify_gradient_oracle(int instances_per_term = 20);
std::vector<CheckResult> verify_tilde_identities();
std::vector<CheckResult> verify_schedules();

/// Exact-solution oracles for a single problem instance (tests pass
/// corrupted instances through this to exercise the failure paths).
std::vector<CheckResult> verify_problem(const Problem& problem, int points = 1000,
                                        std::uint64_t seed = 2024);

std::string format_report(const std::vector<CheckResult>& checks);
bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace pinndd
