#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ca/types.hpp"

namespace ca {

/// Carrier ids sorted by ascending offered price, ties by ascending id.
/// Throws ValidationError on an empty map or a non-finite price.
std::vector<CarrierId> order_carriers(const std::map<CarrierId, double>& prices);

/// UE-side bookkeeping: which carrier to flag next and how much rate the
/// user already holds.
class UeState {
 public:
  /// `prices` holds the offered price of every in-range carrier.
  UeState(UserId user, const std::map<CarrierId, double>& prices);

  UserId user() const { return user_; }
  const std::vector<CarrierId>& order() const { return order_; }

  /// Carrier currently flagged with 1, or nullopt once every in-range
  /// carrier has allocated.
  std::optional<CarrierId> next_flag() const;

  /// Stores the rate granted by the flagged carrier and moves on.
  /// Throws ProtocolError if `carrier` is not the flagged one, or on a
  /// negative rate.
  void record_rate(CarrierId carrier, double rate, double shadow_price);

  /// Rate already held from carriers earlier in the order; the offset the
  /// next carrier must account for.
  double offset() const { return offset_; }

  /// Offsets in effect at each allocation, in carrier order.
  const std::vector<double>& offsets_used() const { return offsets_used_; }

  const std::map<CarrierId, double>& received_rates() const { return rates_; }
  const std::map<CarrierId, double>& received_prices() const { return prices_; }

  bool done() const { return cursor_ == order_.size(); }

  /// Sum of all received rates. Throws ProtocolError before done().
  double aggregate_rate() const;

 private:
  UserId user_;
  std::vector<CarrierId> order_;
  std::size_t cursor_ = 0;
  double offset_ = 0.0;
  std::vector<double> offsets_used_;
  std::map<CarrierId, double> rates_;
  std::map<CarrierId, double> prices_;
};

}  // namespace ca
