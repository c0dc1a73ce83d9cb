#pragma once

#include <map>
#include <vector>

#include "ca/model.hpp"

namespace ca {

/// max sum_j log U_j(r_j + c_j)  s.t.  sum_j r_j <= capacity, r_j >= 0.
struct CentralizedInstance {
  std::vector<UserEntry> entries;
  double capacity = 0.0;
};

struct OracleOptions {
  /// Projected-gradient iterations before the exchange refinement.
  int gradient_iterations = 100'000;
  /// Upper bound on full pairwise-exchange sweeps.
  int exchange_sweeps = 500;
  /// Rates below this are treated as zero when the objective is evaluated.
  double rate_floor = 1e-9;
};

/// Objective value of a rate vector (keyed by user).
double centralized_objective(const CentralizedInstance& instance,
                             const std::map<UserId, double>& rates,
                             double rate_floor = 1e-9);

/// Primal reference solver, independent of the price iteration: normalized
/// projected gradient ascent from the equal split, followed by pairwise
/// rate exchanges optimized by golden-section search on the objective
/// itself. Throws ConvergenceError if the final log-marginals of users with
/// positive rates differ by more than `tolerance` (relative).
std::map<UserId, double> solve_centralized(const CentralizedInstance& instance,
                                           double tolerance = 1e-5,
                                           const OracleOptions& options = {});

struct Comparison {
  double max_deviation = 0.0;
  UserId worst_user;
  bool passed = false;
};

/// max_j |r_alg - r_oracle| / max(r_oracle, 1); passes iff <= tolerance.
/// Throws ValidationError if the two maps do not cover the same users.
Comparison compare(const std::map<UserId, double>& algorithm,
                   const std::map<UserId, double>& oracle, double tolerance);

}  // namespace ca
