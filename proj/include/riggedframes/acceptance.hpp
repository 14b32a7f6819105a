#pragma once

// The acceptance table: each criterion is a self-contained numerical check
// with pinned tolerances and a wall-clock budget.

#include <string>
#include <vector>

namespace rigged {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

/// Runs all criteria in order. Never throws; an exception fails its criterion.
std::vector<CriterionResult> run_acceptance();

/// Runs a single criterion by id (1-based).
CriterionResult run_criterion(int id);

int criterion_count();

/// The analytic frame operator of delta'_x: D^T D with D the (N+1) x N matrix of
/// h_n' = sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1}.
std::vector<std::vector<double>> derivative_gram_oracle(int truncation);

}  // namespace rigged
