#include "ca/protocol.hpp"

#include <algorithm>
#include <exception>
#include <future>
#include <sstream>
#include <string>

#include "ca/ue.hpp"

namespace ca {
namespace {

std::vector<UserEntry> entries_for(const Scenario& scenario, CarrierId carrier,
                                   const std::map<UserId, UeState>* states) {
  std::vector<UserEntry> entries;
  for (const auto uid : scenario.coverage(carrier)) {
    const double offset = states ? states->at(uid).offset() : 0.0;
    entries.push_back({uid, scenario.user(uid).utility, offset});
  }
  return entries;
}

void require_converged(const DualAscentResult& r, CarrierId carrier, const char* phase) {
  if (!r.converged) {
    throw ConvergenceError("carrier " + std::to_string(carrier.value) + ": " + phase +
                           " dual ascent did not converge within " +
                           std::to_string(r.iterations) + " iterations");
  }
}

std::string flag_state(const std::map<UserId, UeState>& states) {
  std::ostringstream os;
  os << "flags:";
  for (const auto& [uid, st] : states) {
    os << " user " << uid << "->";
    if (const auto f = st.next_flag()) {
      os << "carrier " << *f;
    } else {
      os << "done";
    }
    os << ';';
  }
  return os.str();
}

template <typename E>
[[noreturn]] void rethrow_tagged(const E& e, const std::string& tag) {
  throw E(tag + e.what());
}

}  // namespace

const CarrierOutcome& AllocationReport::carrier(CarrierId id) const {
  const auto it = std::find_if(carriers.begin(), carriers.end(),
                               [&](const CarrierOutcome& c) { return c.id == id; });
  if (it == carriers.end()) throw ValidationError("report has no carrier " + std::to_string(id.value));
  return *it;
}

double AllocationReport::rate(CarrierId carrier, UserId user) const {
  const auto it = grants.find({carrier, user});
  return it == grants.end() ? 0.0 : it->second.rate;
}

AllocationReport run(const Scenario& scenario, const SolverParams& params) {
  params.validate();
  AllocationReport report;

  // Phase 1: offered prices, independent per carrier.
  std::vector<std::future<DualAscentResult>> discoveries;
  for (const auto& c : scenario.carriers()) {
    discoveries.push_back(std::async(std::launch::async, [&scenario, &params, c] {
      const auto entries = entries_for(scenario, c.id, nullptr);
      return offered_price(entries, c.capacity, params);
    }));
  }
  std::map<CarrierId, std::size_t> slot;
  for (std::size_t i = 0; i < scenario.carriers().size(); ++i) {
    const auto& c = scenario.carriers()[i];
    CarrierOutcome outcome{c.id, c.capacity, discoveries[i].get(), {}};
    require_converged(outcome.offered, c.id, "price discovery");
    report.carriers.push_back(std::move(outcome));
  }
  std::sort(report.carriers.begin(), report.carriers.end(),
            [](const CarrierOutcome& a, const CarrierOutcome& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < report.carriers.size(); ++i) slot[report.carriers[i].id] = i;

  // Each user orders its in-range carriers by offered price.
  std::map<UserId, UeState> states;
  for (const auto& u : scenario.users()) {
    std::map<CarrierId, double> prices;
    for (const auto cid : u.coverage) prices[cid] = report.carriers[slot[cid]].offered.shadow_price;
    states.emplace(u.id, UeState(u.id, prices));
  }

  // Phase 2: a carrier allocates once every user it covers flags it.
  const std::size_t carrier_count = scenario.carriers().size();
  std::vector<bool> activated(carrier_count, false);
  const int max_rounds = static_cast<int>(carrier_count) + 1;
  for (int round = 1; report.processing_order.size() < carrier_count; ++round) {
    if (round > max_rounds) {
      throw ProtocolError("phase 2 exceeded " + std::to_string(max_rounds) +
                          " activation rounds; " + flag_state(states));
    }
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < carrier_count; ++i) {
      if (activated[i]) continue;
      const auto cid = report.carriers[i].id;
      const auto& members = scenario.coverage(cid);
      const bool flagged = std::all_of(members.begin(), members.end(), [&](UserId uid) {
        return states.at(uid).next_flag() == cid;
      });
      if (flagged) ready.push_back(i);
    }
    if (ready.empty()) {
      throw ProtocolError("phase 2 deadlock: no carrier is flagged by all of its users; " +
                          flag_state(states));
    }
    std::sort(ready.begin(), ready.end(), [&](std::size_t a, std::size_t b) {
      const auto& lhs = report.carriers[a];
      const auto& rhs = report.carriers[b];
      if (lhs.offered.shadow_price != rhs.offered.shadow_price) {
        return lhs.offered.shadow_price < rhs.offered.shadow_price;
      }
      return lhs.id < rhs.id;
    });

    // Carriers ready in the same round cover disjoint user sets.
    for (const auto i : ready) {
      auto& outcome = report.carriers[i];
      const auto entries = entries_for(scenario, outcome.id, &states);
      outcome.allocation = dual_ascent(entries, outcome.capacity, params);
      require_converged(outcome.allocation, outcome.id, "allocation");
      for (const auto& e : entries) {
        const double r = outcome.allocation.rates.at(e.user);
        report.grants[{outcome.id, e.user}] = Grant{r, e.offset};
        states.at(e.user).record_rate(outcome.id, r, outcome.allocation.shadow_price);
      }
      activated[i] = true;
      report.processing_order.push_back(outcome.id);
    }
    report.activation_rounds = round;
  }

  for (const auto& [uid, st] : states) report.aggregates[uid] = st.aggregate_rate();
  return report;
}

std::vector<SweepPoint> sweep(const Scenario& scenario, CarrierId carrier,
                              std::span<const double> capacities, const SolverParams& params) {
  for (const double r : capacities) {
    if (!(r > 0.0)) throw ValidationError("sweep: capacities must be positive");
  }
  std::vector<std::future<AllocationReport>> jobs;
  for (const double r : capacities) {
    jobs.push_back(std::async(std::launch::async, [&scenario, &params, carrier, r] {
      return run(scenario.with_capacity(carrier, r), params);
    }));
  }
  std::vector<SweepPoint> points;
  points.reserve(capacities.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    std::ostringstream tag;
    tag << "capacity " << capacities[i] << ": ";
    try {
      points.push_back({capacities[i], jobs[i].get()});
    } catch (const ConvergenceError& e) {
      rethrow_tagged(e, tag.str());
    } catch (const ProtocolError& e) {
      rethrow_tagged(e, tag.str());
    } catch (const ValidationError& e) {
      rethrow_tagged(e, tag.str());
    }
  }
  return points;
}

}  // namespace ca
