#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ca/types.hpp"
#include "ca/utility.hpp"

namespace ca {

struct CarrierSpec {
  CarrierId id;
  /// Maximum achievable rate, in abstract rate units.
  double capacity = 0.0;

  friend bool operator==(const CarrierSpec&, const CarrierSpec&) = default;
};

struct UserSpec {
  UserId id;
  UtilityFunction utility;
  /// In-range carriers, in the order given by the scenario.
  std::vector<CarrierId> coverage;

  friend bool operator==(const UserSpec&, const UserSpec&) = default;
};

/// A validated set of carriers and users. Immutable once built.
class Scenario {
 public:
  /// Validates and builds. Throws ValidationError naming the offending field.
  static Scenario create(std::vector<CarrierSpec> carriers, std::vector<UserSpec> users);

  const std::vector<CarrierSpec>& carriers() const { return carriers_; }
  const std::vector<UserSpec>& users() const { return users_; }

  const CarrierSpec& carrier(CarrierId id) const;
  const UserSpec& user(UserId id) const;

  /// Users covered by a carrier, ascending by id.
  const std::vector<UserId>& coverage(CarrierId id) const;

  /// Copy of this scenario with one carrier's capacity replaced.
  Scenario with_capacity(CarrierId id, double capacity) const;

  friend bool operator==(const Scenario& a, const Scenario& b) {
    return a.carriers_ == b.carriers_ && a.users_ == b.users_;
  }

 private:
  Scenario() = default;

  std::vector<CarrierSpec> carriers_;
  std::vector<UserSpec> users_;
  std::map<CarrierId, std::vector<UserId>> coverage_;
  std::map<CarrierId, std::size_t> carrier_index_;
  std::map<UserId, std::size_t> user_index_;
};

/// Tunables of the iterative price/rate computation.
struct SolverParams {
  /// Convergence threshold on the bid vector.
  double delta = 1e-3;
  /// Fluctuation decay step bound l1 * exp(-n / l2).
  double l1 = 5.0;
  double l2 = 10.0;
  int max_outer_iters = 10'000;
  /// Consecutive same-direction clamps that mark a stalled bid.
  int stall_window = 10;
  InnerSolveOptions inner{};
  /// Fixed inner-solve cap. When unset, max(capacity, largest r_max).
  std::optional<double> rate_cap;

  /// Throws ValidationError on non-positive values or delta <= tolerance.
  void validate() const;
};

/// One user's participation in a carrier's allocation problem.
struct UserEntry {
  UserId user;
  UtilityFunction utility;
  /// Rate already held from cheaper carriers.
  double offset = 0.0;
};

/// Parses the scenario JSON document:
///   {"carriers": [{"id", "capacity"}],
///    "users": [{"id", "utility": {"type": "sigmoidal", "a", "b"} |
///                                {"type": "logarithmic", "k", "r_max"},
///               "coverage": [ids]}]}
Scenario parse_scenario(std::string_view document);

/// Inverse of parse_scenario, pretty-printed.
std::string serialize_scenario(const Scenario& scenario);

/// Reads and parses a scenario file. Throws IoError if it cannot be read.
Scenario load_scenario(const std::filesystem::path& path);

/// The nine-user, two-carrier reference deployment: three users only in
/// carrier 1, three joint users, three only in carrier 2.
Scenario preset_section5(double capacity1 = 100.0, double capacity2 = 100.0);

}  // namespace ca
