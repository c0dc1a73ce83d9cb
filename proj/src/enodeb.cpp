#include "ca/enodeb.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ca {
namespace {

// Below this the bids are treated as having collapsed for good: no
// representable price clears the market because every utility is flat.
constexpr double kMinPrice = 1e-300;

double inner_rate_cap(std::span<const UserEntry> entries, double capacity,
                      const SolverParams& params) {
  if (params.rate_cap) return *params.rate_cap;
  double cap = capacity;
  for (const auto& e : entries) {
    if (const auto* l = std::get_if<Logarithmic>(&e.utility.shape())) cap = std::max(cap, l->r_max);
  }
  return cap;
}

}  // namespace

double fluctuation_step(int n, double l1, double l2) {
  return l1 * std::exp(-static_cast<double>(n) / l2);
}

double fluctuation_clamp(double w_new, double w_prev, int n, double l1, double l2) {
  const double step = fluctuation_step(n, l1, l2);
  const double diff = w_new - w_prev;
  if (std::abs(diff) <= step) return w_new;
  return w_prev + std::copysign(step, diff);
}

DualAscentResult dual_ascent(std::span<const UserEntry> entries, double capacity,
                             const SolverParams& params) {
  params.validate();
  if (entries.empty()) throw ValidationError("dual_ascent: no entries");
  if (!(capacity > 0.0) || !std::isfinite(capacity)) {
    throw ValidationError("dual_ascent: capacity must be positive, got " +
                          std::to_string(capacity));
  }
  for (const auto& e : entries) {
    if (!(e.offset >= 0.0) || !std::isfinite(e.offset)) {
      throw ValidationError("dual_ascent: offset of user " + std::to_string(e.user.value) +
                            " must be >= 0");
    }
  }

  const std::size_t m = entries.size();
  const double cap = inner_rate_cap(entries, capacity, params);
  const double share = capacity / static_cast<double>(m);

  DualAscentResult result;
  result.trace.users.reserve(m);
  for (const auto& e : entries) result.trace.users.push_back(e.user);

  // Every user starts by bidding its marginal valuation of an equal share.
  std::vector<double> bids(m);
  for (std::size_t j = 0; j < m; ++j) {
    bids[j] = log_marginal(entries[j].utility, share + entries[j].offset) * share;
  }

  std::vector<double> next(m);
  std::vector<double> demands(m);
  std::vector<int> streak(m, 0);
  std::vector<int> direction(m, 0);

  double last_price = 0.0;
  for (const double w : bids) last_price += w;
  last_price /= capacity;

  int decay_origin = 0;
  bool satiated = false;
  for (int n = 1; n <= params.max_outer_iters; ++n) {
    double total = 0.0;
    for (const double w : bids) total += w;

    // All bids vanished: the last price exceeded every marginal valuation.
    const bool backoff = !(total > 0.0);
    const double price = backoff ? last_price / 2.0 : total / capacity;
    if (backoff && price < kMinPrice) {
      satiated = true;
      result.converged = true;
      break;
    }
    last_price = price;

    const int k = n - decay_origin;
    double change = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const auto& e = entries[j];
      demands[j] = net_benefit_maximizer(e.utility, price, e.offset, cap, params.inner);
      const double target = price * demands[j];
      next[j] = fluctuation_clamp(target, bids[j], k, params.l1, params.l2);
      if (next[j] != target) {
        const int dir = target > bids[j] ? 1 : -1;
        streak[j] = dir == direction[j] ? streak[j] + 1 : 1;
        direction[j] = dir;
      } else {
        streak[j] = 0;
        direction[j] = 0;
      }
      change = std::max(change, std::abs(next[j] - bids[j]));
    }
    bids.swap(next);
    result.trace.records.push_back({n, price, bids, demands});
    result.iterations = n;
    result.final_bid_change = change;

    if (!backoff && change <= params.delta * std::min(1.0, price)) {
      if (*std::max_element(streak.begin(), streak.end()) >= params.stall_window) {
        decay_origin = n;
        ++result.decay_restarts;
        std::fill(streak.begin(), streak.end(), 0);
        std::fill(direction.begin(), direction.end(), 0);
      } else {
        result.converged = true;
        break;
      }
    }
  }

  double total = 0.0;
  for (const double w : bids) total += w;
  if (satiated || !(total > 0.0)) {
    // Every utility is flat to working precision; any split is optimal.
    result.shadow_price = last_price;
    for (const auto& e : entries) result.rates[e.user] = share;
    return result;
  }
  result.shadow_price = total / capacity;
  for (std::size_t j = 0; j < m; ++j) {
    result.rates[entries[j].user] = bids[j] / result.shadow_price;
  }
  return result;
}

DualAscentResult offered_price(std::span<const UserEntry> users, double capacity,
                               const SolverParams& params) {
  std::vector<UserEntry> zeroed(users.begin(), users.end());
  for (auto& e : zeroed) e.offset = 0.0;
  return dual_ascent(zeroed, capacity, params);
}

}  // namespace ca
