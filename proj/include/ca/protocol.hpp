#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "ca/enodeb.hpp"
#include "ca/model.hpp"

namespace ca {

struct CarrierOutcome {
  CarrierId id;
  double capacity = 0.0;
  /// Price discovery with every covered user at zero offset.
  DualAscentResult offered;
  /// Allocation run with each user's accumulated offset.
  DualAscentResult allocation;
};

/// Rate granted by one carrier to one user.
struct Grant {
  double rate = 0.0;
  /// Rate the user already held when this carrier allocated.
  double offset = 0.0;
};

struct AllocationReport {
  /// Ascending by carrier id.
  std::vector<CarrierOutcome> carriers;
  /// Keyed by (carrier, user); only pairs where the carrier covers the user.
  std::map<std::pair<CarrierId, UserId>, Grant> grants;
  std::map<UserId, double> aggregates;
  /// Carriers in the order they ran their allocation.
  std::vector<CarrierId> processing_order;
  int activation_rounds = 0;

  const CarrierOutcome& carrier(CarrierId id) const;
  double offered_price(CarrierId id) const { return carrier(id).offered.shadow_price; }
  double allocation_price(CarrierId id) const { return carrier(id).allocation.shadow_price; }
  /// Zero when the carrier does not cover the user.
  double rate(CarrierId carrier, UserId user) const;
};

/// Runs both phases: every carrier computes its offered price, then each
/// carrier allocates once all of its users flag it, cheapest first.
///
/// Throws ConvergenceError naming the carrier if any dual ascent hits its
/// iteration cap, and ProtocolError with the flag state on a deadlock.
AllocationReport run(const Scenario& scenario, const SolverParams& params);

struct SweepPoint {
  double capacity = 0.0;
  AllocationReport report;
};

/// Calls run() once per capacity substituted into `carrier`. Points are
/// computed concurrently; the result keeps the input order. Errors are
/// rethrown with the capacity prepended.
std::vector<SweepPoint> sweep(const Scenario& scenario, CarrierId carrier,
                              std::span<const double> capacities, const SolverParams& params);

}  // namespace ca
