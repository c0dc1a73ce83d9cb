#include "ca/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ca {

using nlohmann::json;

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Scenario Scenario::create(std::vector<CarrierSpec> carriers, std::vector<UserSpec> users) {
  Scenario s;
  if (carriers.empty()) throw ValidationError("carriers: scenario needs at least one carrier");
  if (users.empty()) throw ValidationError("users: scenario needs at least one user");

  for (std::size_t i = 0; i < carriers.size(); ++i) {
    const auto& c = carriers[i];
    const std::string where = "carriers[" + std::to_string(i) + "]";
    if (c.id.value < 1) {
      throw ValidationError(where + ".id: must be >= 1, got " + std::to_string(c.id.value));
    }
    if (!(c.capacity > 0.0) || !std::isfinite(c.capacity)) {
      throw ValidationError(where + ".capacity: must be positive, got " + num(c.capacity));
    }
    if (!s.carrier_index_.emplace(c.id, i).second) {
      throw ValidationError(where + ".id: duplicate carrier id " + std::to_string(c.id.value));
    }
    s.coverage_[c.id];
  }

  for (std::size_t j = 0; j < users.size(); ++j) {
    const auto& u = users[j];
    const std::string where = "users[" + std::to_string(j) + "]";
    if (u.id.value < 1) {
      throw ValidationError(where + ".id: must be >= 1, got " + std::to_string(u.id.value));
    }
    if (!s.user_index_.emplace(u.id, j).second) {
      throw ValidationError(where + ".id: duplicate user id " + std::to_string(u.id.value));
    }
    if (u.coverage.empty()) {
      throw ValidationError(where + ".coverage: must not be empty (user " +
                            std::to_string(u.id.value) + ")");
    }
    std::set<CarrierId> seen;
    for (const auto cid : u.coverage) {
      if (!s.carrier_index_.contains(cid)) {
        throw ValidationError(where + ".coverage: unknown carrier id " +
                              std::to_string(cid.value) + " (user " +
                              std::to_string(u.id.value) + ")");
      }
      if (!seen.insert(cid).second) {
        throw ValidationError(where + ".coverage: carrier id " + std::to_string(cid.value) +
                              " listed twice (user " + std::to_string(u.id.value) + ")");
      }
      s.coverage_[cid].push_back(u.id);
    }
  }

  for (auto& [cid, members] : s.coverage_) {
    if (members.empty()) {
      throw ValidationError("carriers: carrier " + std::to_string(cid.value) +
                            " covers no users");
    }
    std::sort(members.begin(), members.end());
  }

  s.carriers_ = std::move(carriers);
  s.users_ = std::move(users);
  return s;
}

const CarrierSpec& Scenario::carrier(CarrierId id) const {
  const auto it = carrier_index_.find(id);
  if (it == carrier_index_.end()) {
    throw ValidationError("unknown carrier id " + std::to_string(id.value));
  }
  return carriers_[it->second];
}

const UserSpec& Scenario::user(UserId id) const {
  const auto it = user_index_.find(id);
  if (it == user_index_.end()) throw ValidationError("unknown user id " + std::to_string(id.value));
  return users_[it->second];
}

const std::vector<UserId>& Scenario::coverage(CarrierId id) const {
  const auto it = coverage_.find(id);
  if (it == coverage_.end()) {
    throw ValidationError("unknown carrier id " + std::to_string(id.value));
  }
  return it->second;
}

Scenario Scenario::with_capacity(CarrierId id, double capacity) const {
  auto carriers = carriers_;
  const auto it = carrier_index_.find(id);
  if (it == carrier_index_.end()) {
    throw ValidationError("unknown carrier id " + std::to_string(id.value));
  }
  carriers[it->second].capacity = capacity;
  return create(std::move(carriers), users_);
}

void SolverParams::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string("solver parameter ") + name + " must be positive, got " +
                            num(v));
    }
  };
  positive(delta, "delta");
  positive(l1, "l1");
  positive(l2, "l2");
  positive(inner.tolerance, "tol_r");
  positive(inner.rate_floor, "rate_floor");
  if (max_outer_iters < 1) throw ValidationError("solver parameter max_outer_iters must be >= 1");
  if (stall_window < 1) throw ValidationError("solver parameter stall_window must be >= 1");
  if (inner.max_iterations < 1) {
    throw ValidationError("solver parameter inner max_iterations must be >= 1");
  }
  if (rate_cap) positive(*rate_cap, "rate_cap");
  if (!(delta > inner.tolerance)) {
    throw ValidationError("solver parameter delta (" + num(delta) +
                          ") must exceed the inner tolerance (" + num(inner.tolerance) + ")");
  }
}

// ---------------------------------------------------------------------------
// JSON

namespace {

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + "." + key + ": missing");
  return *it;
}

double number(const json& obj, const char* key, const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_number()) throw ParseError(where + "." + key + ": expected a number");
  return v.get<double>();
}

std::int64_t integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError(where + ": expected an integer");
  return v.get<std::int64_t>();
}

UtilityFunction parse_utility(const json& u, const std::string& where) {
  const auto& type = field(u, "type", where);
  if (!type.is_string()) throw ParseError(where + ".type: expected a string");
  const auto name = type.get<std::string>();
  const auto positive = [&](const char* key) {
    const double v = number(u, key, where);
    if (!(v > 0.0)) {
      throw ValidationError(where + "." + key + ": must be positive, got " + num(v));
    }
    return v;
  };
  if (name == "sigmoidal") {
    const double a = positive("a");
    const double b = positive("b");
    return UtilityFunction::sigmoidal(a, b);
  }
  if (name == "logarithmic") {
    const double k = positive("k");
    const double r_max = positive("r_max");
    return UtilityFunction::logarithmic(k, r_max);
  }
  throw ParseError(where + ".type: unknown utility type \"" + name + "\"");
}

json utility_json(const UtilityFunction& u) {
  if (const auto* s = std::get_if<Sigmoidal>(&u.shape())) {
    return {{"type", "sigmoidal"}, {"a", s->a}, {"b", s->b}};
  }
  const auto& l = std::get<Logarithmic>(u.shape());
  return {{"type", "logarithmic"}, {"k", l.k}, {"r_max", l.r_max}};
}

}  // namespace

Scenario parse_scenario(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("document: expected a JSON object");

  const auto& carriers_json = field(doc, "carriers", "document");
  const auto& users_json = field(doc, "users", "document");
  if (!carriers_json.is_array()) throw ParseError("carriers: expected an array");
  if (!users_json.is_array()) throw ParseError("users: expected an array");

  std::vector<CarrierSpec> carriers;
  for (std::size_t i = 0; i < carriers_json.size(); ++i) {
    const std::string where = "carriers[" + std::to_string(i) + "]";
    const auto& c = carriers_json[i];
    carriers.push_back(
        {CarrierId{integer(field(c, "id", where), where + ".id")}, number(c, "capacity", where)});
  }

  std::vector<UserSpec> users;
  for (std::size_t j = 0; j < users_json.size(); ++j) {
    const std::string where = "users[" + std::to_string(j) + "]";
    const auto& u = users_json[j];
    const UserId id{integer(field(u, "id", where), where + ".id")};
    auto utility = parse_utility(field(u, "utility", where), where + ".utility");
    const auto& cov = field(u, "coverage", where);
    if (!cov.is_array()) throw ParseError(where + ".coverage: expected an array");
    std::vector<CarrierId> coverage;
    for (std::size_t m = 0; m < cov.size(); ++m) {
      coverage.emplace_back(integer(cov[m], where + ".coverage[" + std::to_string(m) + "]"));
    }
    users.push_back({id, std::move(utility), std::move(coverage)});
  }
  return Scenario::create(std::move(carriers), std::move(users));
}

std::string serialize_scenario(const Scenario& scenario) {
  json doc;
  doc["carriers"] = json::array();
  for (const auto& c : scenario.carriers()) {
    doc["carriers"].push_back({{"id", c.id.value}, {"capacity", c.capacity}});
  }
  doc["users"] = json::array();
  for (const auto& u : scenario.users()) {
    json cov = json::array();
    for (const auto cid : u.coverage) cov.push_back(cid.value);
    doc["users"].push_back({{"id", u.id.value}, {"utility", utility_json(u.utility)}, {"coverage", cov}});
  }
  return doc.dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

Scenario preset_section5(double capacity1, double capacity2) {
  const CarrierId c1{1};
  const CarrierId c2{2};
  const auto sig = UtilityFunction::sigmoidal;
  const auto log = UtilityFunction::logarithmic;
  std::vector<UserSpec> users{
      {UserId{1}, sig(5, 10), {c1}},         {UserId{2}, sig(3, 20), {c1}},
      {UserId{3}, log(15, 100), {c1}},       {UserId{4}, log(3, 100), {c1, c2}},
      {UserId{5}, log(0.5, 100), {c1, c2}},  {UserId{6}, sig(1, 30), {c1, c2}},
      {UserId{7}, sig(5, 10), {c2}},         {UserId{8}, sig(3, 20), {c2}},
      {UserId{9}, log(15, 100), {c2}},
  };
  return Scenario::create({{c1, capacity1}, {c2, capacity2}}, std::move(users));
}

}  // namespace ca
