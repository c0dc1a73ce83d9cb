#include "ca/ue.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ca {

std::vector<CarrierId> order_carriers(const std::map<CarrierId, double>& prices) {
  if (prices.empty()) throw ValidationError("order_carriers: no offered prices");
  std::vector<std::pair<double, CarrierId>> keyed;
  keyed.reserve(prices.size());
  for (const auto& [id, price] : prices) {
    if (!std::isfinite(price)) {
      throw ValidationError("order_carriers: non-finite price for carrier " +
                            std::to_string(id.value));
    }
    keyed.emplace_back(price, id);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<CarrierId> order;
  order.reserve(keyed.size());
  for (const auto& [price, id] : keyed) order.push_back(id);
  return order;
}

UeState::UeState(UserId user, const std::map<CarrierId, double>& prices)
    : user_(user), order_(order_carriers(prices)) {}

std::optional<CarrierId> UeState::next_flag() const {
  if (done()) return std::nullopt;
  return order_[cursor_];
}

void UeState::record_rate(CarrierId carrier, double rate, double shadow_price) {
  const auto expected = next_flag();
  if (!expected) {
    throw ProtocolError("user " + std::to_string(user_.value) + " received a rate from carrier " +
                        std::to_string(carrier.value) + " after its last allocation");
  }
  if (carrier != *expected) {
    throw ProtocolError("user " + std::to_string(user_.value) + " expected carrier " +
                        std::to_string(expected->value) + " but received a rate from carrier " +
                        std::to_string(carrier.value));
  }
  if (!(rate >= 0.0)) {
    throw ProtocolError("user " + std::to_string(user_.value) + " received negative rate from carrier " +
                        std::to_string(carrier.value));
  }
  offsets_used_.push_back(offset_);
  rates_[carrier] = rate;
  prices_[carrier] = shadow_price;
  offset_ += rate;
  ++cursor_;
}

double UeState::aggregate_rate() const {
  if (!done()) {
    throw ProtocolError("user " + std::to_string(user_.value) +
                        " has not heard from all in-range carriers");
  }
  return offset_;
}

}  // namespace ca
