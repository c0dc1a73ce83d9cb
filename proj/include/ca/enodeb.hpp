#pragma once

#include <map>
#include <span>
#include <vector>

#include "ca/model.hpp"

namespace ca {

/// One outer iteration of the bid/price loop.
struct TraceRecord {
  int iteration = 0;
  /// Price announced at the start of the iteration.
  double price = 0.0;
  /// Bids after the fluctuation clamp, aligned with ConvergenceTrace::users.
  std::vector<double> bids;
  /// Rates demanded at `price`, aligned with ConvergenceTrace::users.
  std::vector<double> demands;
};

struct ConvergenceTrace {
  std::vector<UserId> users;
  std::vector<TraceRecord> records;
};

struct DualAscentResult {
  double shadow_price = 0.0;
  std::map<UserId, double> rates;
  ConvergenceTrace trace;
  int iterations = 0;
  bool converged = false;
  /// Largest bid change in the last iteration.
  double final_bid_change = 0.0;
  /// Times the fluctuation decay was restarted after a stalled bid.
  int decay_restarts = 0;
};

/// Step bound l1 * exp(-n / l2) of the fluctuation decay.
double fluctuation_step(int n, double l1, double l2);

/// Limits a bid update to the decaying step bound: returns w_new when it is
/// within fluctuation_step(n) of w_prev, otherwise moves w_prev by exactly
/// that bound towards w_new.
double fluctuation_clamp(double w_new, double w_prev, int n, double l1, double l2);

/// Iterative price/bid computation for one carrier.
///
/// Each iteration announces p = sum(w) / capacity, lets every entry demand
/// the rate maximizing log U(r + offset) - p r, and moves each bid towards
/// p * demand under the fluctuation clamp. The loop stops once no bid moves
/// by more than delta * min(1, p). A bid that is still clamped in the same
/// direction for `stall_window` iterations at that point restarts the decay
/// clock instead of stopping. Final rates are bid / price, so they use the
/// whole capacity.
///
/// Throws ValidationError on empty entries, a non-positive capacity or
/// invalid params. Hitting the iteration cap is reported through
/// `converged`, not thrown.
DualAscentResult dual_ascent(std::span<const UserEntry> entries, double capacity,
                             const SolverParams& params);

/// The price a carrier would charge as primary carrier for all the users
/// it covers: dual_ascent with zero offsets. The offered price is the
/// result's shadow_price.
DualAscentResult offered_price(std::span<const UserEntry> users, double capacity,
                               const SolverParams& params);

}  // namespace ca
