#include <cmath>
#include <string>

#include "ca/protocol.hpp"
#include "ca/report_io.hpp"
#include "doctest.h"

using namespace ca;

namespace {

const CarrierId kC1(1);
const CarrierId kC2(2);

double aggregate_total(const AllocationReport& r) {
  double s = 0.0;
  for (const auto& [uid, v] : r.aggregates) s += v;
  return s;
}

std::vector<double> capacities(double start, double stop, double step) {
  std::vector<double> out;
  for (double r = start; r <= stop + 1e-9; r += step) out.push_back(r);
  return out;
}

Scenario chain() {
  // Carrier 2 is shared by both users; 1 and 3 are private.
  const auto log = UtilityFunction::logarithmic(3, 100);
  const auto sig = UtilityFunction::sigmoidal(1, 30);
  return Scenario::create({{CarrierId(1), 20}, {CarrierId(2), 200}, {CarrierId(3), 40}},
                          {{UserId(1), log, {CarrierId(1), CarrierId(2)}},
                           {UserId(2), sig, {CarrierId(2), CarrierId(3)}}});
}

}  // namespace

TEST_CASE("run: scarce carrier 1 makes carrier 2 primary") {
  const auto r = run(preset_section5(50, 100), SolverParams{});
  REQUIRE(r.processing_order.size() == 2);
  CHECK(r.processing_order[0] == kC2);
  CHECK(r.offered_price(kC1) > r.offered_price(kC2));
  for (const int j : {4, 5, 6}) {
    CHECK(r.grants.at({kC2, UserId(j)}).offset == 0.0);
    CHECK(r.grants.at({kC1, UserId(j)}).offset == r.grants.at({kC2, UserId(j)}).rate);
  }
}

TEST_CASE("run: abundant carrier 1 becomes primary") {
  const auto r = run(preset_section5(200, 100), SolverParams{});
  REQUIRE(r.processing_order.size() == 2);
  CHECK(r.processing_order[0] == kC1);
  CHECK(r.offered_price(kC2) > r.offered_price(kC1));
  for (const int j : {4, 5, 6}) CHECK(r.grants.at({kC1, UserId(j)}).offset == 0.0);
}

TEST_CASE("run: single carrier, single user") {
  const auto s = Scenario::create({{kC1, 10}}, {{UserId(1), UtilityFunction::logarithmic(15, 100), {kC1}}});
  const auto r = run(s, SolverParams{});
  CHECK(r.aggregates.at(UserId(1)) == doctest::Approx(10.0).epsilon(1e-12));
  const double expected = 15.0 / (151.0 * std::log(151.0));
  CHECK(std::abs(r.offered_price(kC1) - expected) / expected <= 1e-3);
  CHECK(r.activation_rounds == 1);
}

TEST_CASE("run: two activations, conservation, grants cover coverage") {
  const auto s = preset_section5(80, 100);
  const auto r = run(s, SolverParams{});
  CHECK(r.processing_order.size() == 2);
  CHECK(r.activation_rounds == 2);
  CHECK(std::abs(aggregate_total(r) - 180) <= 1e-3 * 180);
  CHECK(r.grants.size() == 12);
  CHECK(r.rate(kC1, UserId(9)) == 0.0);
  for (const auto& u : s.users()) {
    double sum = 0.0;
    for (const auto cid : u.coverage) sum += r.rate(cid, u.id);
    CHECK(r.aggregates.at(u.id) == doctest::Approx(sum).epsilon(1e-15));
  }
}

TEST_CASE("run: lowest-priced carrier activates first in a chain") {
  const auto r = run(chain(), SolverParams{});
  REQUIRE(r.processing_order.size() == 3);
  CarrierId cheapest = r.carriers.front().id;
  for (const auto& c : r.carriers) {
    if (c.offered.shadow_price < r.offered_price(cheapest)) cheapest = c.id;
  }
  CHECK(r.processing_order.front() == cheapest);
  CHECK(std::abs(aggregate_total(r) - 260) <= 1e-3 * 260);
}

TEST_CASE("run: disjoint islands activate in the same round") {
  const auto log = UtilityFunction::logarithmic(15, 100);
  const auto s = Scenario::create({{kC1, 10}, {kC2, 30}},
                                  {{UserId(1), log, {kC1}}, {UserId(2), log, {kC2}}});
  const auto r = run(s, SolverParams{});
  CHECK(r.activation_rounds == 1);
  REQUIRE(r.processing_order.size() == 2);
  // Ascending offered price within the round.
  CHECK(r.offered_price(r.processing_order[0]) <= r.offered_price(r.processing_order[1]));
  CHECK(r.aggregates.at(UserId(2)) == doctest::Approx(30.0));
}

TEST_CASE("run: bit-identical reruns") {
  const auto s = preset_section5(120, 100);
  const auto a = run(s, SolverParams{});
  const auto b = run(s, SolverParams{});
  CHECK(allocations_csv(a) == allocations_csv(b));
  CHECK(prices_csv(a) == prices_csv(b));
  CHECK(aggregates_csv(a) == aggregates_csv(b));
  for (std::size_t i = 0; i < a.carriers.size(); ++i) {
    CHECK(trace_csv(a.carriers[i].allocation.trace) == trace_csv(b.carriers[i].allocation.trace));
  }
}

TEST_CASE("run: non-convergence names the carrier") {
  SolverParams p;
  p.max_outer_iters = 3;
  try {
    run(preset_section5(), p);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(std::string(e.what()).find("carrier ") != std::string::npos);
  }
}

TEST_CASE("sweep: reference sweep prices") {
  const auto caps = capacities(50, 200, 10);
  const auto points = sweep(preset_section5(), kC1, caps, SolverParams{});
  REQUIRE(points.size() == 16);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& rep = points[i].report;
    const double r1 = points[i].capacity;
    CHECK(r1 == caps[i]);
    if (i > 0) CHECK(rep.offered_price(kC1) < points[i - 1].report.offered_price(kC1));
    if (r1 <= 100) {
      CHECK(rep.offered_price(kC1) >= rep.offered_price(kC2) * (1 - 1e-3));
    } else {
      CHECK(rep.offered_price(kC1) < rep.offered_price(kC2));
    }
    CHECK(std::abs(aggregate_total(rep) - (r1 + 100)) <= 1e-3 * (r1 + 100));
  }
}

TEST_CASE("sweep: single capacity equals run") {
  const std::vector<double> caps{100};
  const auto points = sweep(preset_section5(), kC1, caps, SolverParams{});
  REQUIRE(points.size() == 1);
  const auto direct = run(preset_section5(100, 100), SolverParams{});
  CHECK(allocations_csv(points[0].report) == allocations_csv(direct));
  CHECK(prices_csv(points[0].report) == prices_csv(direct));
}

TEST_CASE("sweep: errors carry the capacity") {
  const std::vector<double> bad{50, -1};
  CHECK_THROWS_AS(sweep(preset_section5(), kC1, bad, SolverParams{}), ValidationError);
  SolverParams p;
  p.max_outer_iters = 3;
  const std::vector<double> caps{60};
  try {
    sweep(preset_section5(), kC1, caps, p);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(std::string(e.what()).rfind("capacity 60: ", 0) == 0);
  }
}
