#include <cmath>
#include <numeric>

#include "ca/enodeb.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ca;

namespace {

const auto kLog15 = UtilityFunction::logarithmic(15, 100);
const auto kSig510 = UtilityFunction::sigmoidal(5, 10);

double total(const DualAscentResult& r) {
  double s = 0.0;
  for (const auto& [uid, rate] : r.rates) s += rate;
  return s;
}

std::vector<UserEntry> carrier_entries(const Scenario& s, CarrierId cid) {
  std::vector<UserEntry> out;
  for (const auto uid : s.coverage(cid)) out.push_back({uid, s.user(uid).utility, 0.0});
  return out;
}

}  // namespace

TEST_CASE("fluctuation_step") {
  CHECK(fluctuation_step(1, 5, 10) == doctest::Approx(5 * std::exp(-0.1)));
  CHECK(fluctuation_step(30, 5, 10) == doctest::Approx(5 * std::exp(-3.0)));
}

TEST_CASE("fluctuation_clamp examples") {
  CHECK(fluctuation_clamp(10, 0, 1, 5, 10) == doctest::Approx(4.524187).epsilon(1e-6));
  CHECK(fluctuation_clamp(3.05, 3, 1, 5, 10) == 3.05);
  CHECK(fluctuation_clamp(2, 10, 30, 5, 10) == doctest::Approx(10 - 5 * std::exp(-3.0)));
  CHECK(fluctuation_clamp(2, 10, 30, 5, 10) == doctest::Approx(9.751).epsilon(1e-4));
  CHECK(fluctuation_clamp(7, 7, 5, 5, 10) == 7.0);
}

TEST_CASE("dual_ascent: single logarithmic user takes the whole capacity") {
  const std::vector<UserEntry> e{{UserId(1), kLog15, 0.0}};
  const auto r = dual_ascent(e, 10, SolverParams{});
  CHECK(r.converged);
  CHECK(r.rates.at(UserId(1)) == doctest::Approx(10.0).epsilon(1e-12));
  const double expected = 15.0 / (151.0 * std::log(151.0));
  CHECK(std::abs(r.shadow_price - expected) / expected <= 1e-3);
}

TEST_CASE("dual_ascent: identical users split evenly") {
  const std::vector<UserEntry> e{{UserId(1), kLog15, 0.0}, {UserId(2), kLog15, 0.0}};
  const auto r = dual_ascent(e, 20, SolverParams{});
  CHECK(r.converged);
  CHECK(r.rates.at(UserId(1)) == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(r.rates.at(UserId(2)) == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(std::abs(r.shadow_price - 0.019800) / 0.019800 <= 1e-3);
}

TEST_CASE("dual_ascent: single sigmoidal user below its inflection") {
  const std::vector<UserEntry> e{{UserId(1), kSig510, 0.0}};
  const auto r = dual_ascent(e, 5, SolverParams{});
  CHECK(r.converged);
  CHECK(r.rates.at(UserId(1)) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(std::abs(r.shadow_price - 5.0) / 5.0 <= 1e-3);
}

TEST_CASE("dual_ascent: an offset user receives less") {
  const std::vector<UserEntry> e{{UserId(1), kLog15, 10.0}, {UserId(2), kLog15, 0.0}};
  const auto r = dual_ascent(e, 10, SolverParams{});
  CHECK(r.converged);
  CHECK(r.rates.at(UserId(1)) < r.rates.at(UserId(2)));

  const double r1 = ca::test::grid_argmax(
      [](double x) { return log_utility(kLog15, x + 10) + log_utility(kLog15, std::max(10 - x, 1e-9)); },
      0, 10, 100'001);
  CHECK(std::abs(r.rates.at(UserId(1)) - r1) <= 1e-2);
  CHECK(std::abs(r.rates.at(UserId(2)) - (10 - r1)) <= 1e-2);
}

TEST_CASE("dual_ascent: capacity saturation and stationarity on the preset carriers") {
  const auto s = preset_section5();
  for (const double cap : {50.0, 100.0, 150.0, 200.0}) {
    for (const auto cid : {CarrierId(1), CarrierId(2)}) {
      const auto entries = carrier_entries(s, cid);
      const auto r = dual_ascent(entries, cap, SolverParams{});
      CAPTURE(cap);
      REQUIRE(r.converged);
      CHECK(std::abs(total(r) - cap) <= 1e-3 * cap);
      for (const auto& e : entries) {
        const double rate = r.rates.at(e.user);
        if (rate <= 1e-6) continue;
        const double m = log_marginal(e.utility, rate + e.offset);
        CHECK(std::abs(m - r.shadow_price) <= 5e-3 * r.shadow_price);
      }
    }
  }
}

TEST_CASE("offered_price: non-increasing in capacity") {
  const auto s = preset_section5();
  const auto entries = carrier_entries(s, CarrierId(1));
  double prev = INFINITY;
  for (double cap = 50; cap <= 200; cap += 10) {
    const auto r = offered_price(entries, cap, SolverParams{});
    REQUIRE(r.converged);
    CHECK(r.shadow_price <= prev);
    prev = r.shadow_price;
  }
}

TEST_CASE("offered_price: isomorphic carriers price alike") {
  const auto s = preset_section5();
  const double p1 = offered_price(carrier_entries(s, CarrierId(1)), 100, SolverParams{}).shadow_price;
  const double p2 = offered_price(carrier_entries(s, CarrierId(2)), 100, SolverParams{}).shadow_price;
  CHECK(std::abs(p1 - p2) / p2 <= 1e-3);
}

TEST_CASE("offered_price ignores offsets") {
  const std::vector<UserEntry> with{{UserId(1), kLog15, 7.0}, {UserId(2), kSig510, 3.0}};
  const std::vector<UserEntry> without{{UserId(1), kLog15, 0.0}, {UserId(2), kSig510, 0.0}};
  CHECK(offered_price(with, 30, SolverParams{}).shadow_price ==
        dual_ascent(without, 30, SolverParams{}).shadow_price);
}

TEST_CASE("dual_ascent: deterministic traces") {
  const auto entries = carrier_entries(preset_section5(), CarrierId(1));
  const auto a = dual_ascent(entries, 70, SolverParams{});
  const auto b = dual_ascent(entries, 70, SolverParams{});
  REQUIRE(a.trace.records.size() == b.trace.records.size());
  CHECK(a.shadow_price == b.shadow_price);
  for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
    CHECK(a.trace.records[i].price == b.trace.records[i].price);
    CHECK(a.trace.records[i].bids == b.trace.records[i].bids);
    CHECK(a.trace.records[i].demands == b.trace.records[i].demands);
  }
}

TEST_CASE("dual_ascent: trace layout") {
  const auto entries = carrier_entries(preset_section5(), CarrierId(2));
  const auto r = dual_ascent(entries, 100, SolverParams{});
  CHECK(r.trace.users.size() == entries.size());
  CHECK(static_cast<int>(r.trace.records.size()) == r.iterations);
  for (std::size_t i = 0; i < r.trace.records.size(); ++i) {
    CHECK(r.trace.records[i].iteration == static_cast<int>(i) + 1);
    CHECK(r.trace.records[i].bids.size() == entries.size());
    CHECK(r.trace.records[i].demands.size() == entries.size());
  }
  CHECK(r.final_bid_change <= 1e-3);
}

TEST_CASE("dual_ascent: iteration cap is reported, not thrown") {
  SolverParams p;
  p.max_outer_iters = 2;
  const auto r = dual_ascent(carrier_entries(preset_section5(), CarrierId(1)), 100, p);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);
}

TEST_CASE("dual_ascent: invalid input") {
  const std::vector<UserEntry> none;
  CHECK_THROWS_AS(dual_ascent(none, 10, SolverParams{}), ValidationError);
  const std::vector<UserEntry> one{{UserId(1), kLog15, 0.0}};
  CHECK_THROWS_AS(dual_ascent(one, 0, SolverParams{}), ValidationError);
  const std::vector<UserEntry> negative{{UserId(1), kLog15, -1.0}};
  CHECK_THROWS_AS(dual_ascent(negative, 10, SolverParams{}), ValidationError);
}
