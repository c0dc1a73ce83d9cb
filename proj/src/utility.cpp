#include "ca/utility.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ca {
namespace {

// Logistic s(x) = 1 / (1 + e^{-x}) and its complement, each evaluated on
// the branch where the exponential cannot overflow.
double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logistic_complement(double x) {
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

// log(1 + e^z)
double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError(std::string("utility parameter ") + name +
                          " must be positive and finite, got " + std::to_string(v));
  }
}

void require_rate(double rate) {
  if (std::isnan(rate) || rate < 0.0) {
    throw DomainError("rate must be >= 0, got " + std::to_string(rate));
  }
}

// With s = logistic(a (r - b)) and d = 1 / (1 + e^{ab}), the sigmoid's
// c (s - d) factors exactly into s * (1 - e^{-ar}). This avoids both the
// e^{ab} overflow and the cancellation in s - d near r = 0.
double sigmoid_value(const Sigmoidal& s, double r) {
  return logistic(s.a * (r - s.b)) * -std::expm1(-s.a * r);
}

double sigmoid_log_value(const Sigmoidal& s, double r) {
  if (r == 0.0) return -std::numeric_limits<double>::infinity();
  return -softplus(-s.a * (r - s.b)) + std::log(-std::expm1(-s.a * r));
}

// d/dr of the factored log: a (1 - s) + a e^{-ar} / (1 - e^{-ar}).
double sigmoid_log_marginal(const Sigmoidal& s, double r) {
  const double tail = std::exp(-s.a * r) / -std::expm1(-s.a * r);
  return s.a * logistic_complement(s.a * (r - s.b)) + s.a * tail;
}

double log_norm(const Logarithmic& l) { return std::log1p(l.k * l.r_max); }

}  // namespace

double Sigmoidal::c() const { return 1.0 + std::exp(-a * b); }

double Sigmoidal::d() const {
  const double e = std::exp(-a * b);
  return e / (1.0 + e);
}

UtilityFunction UtilityFunction::sigmoidal(double a, double b) {
  require_positive(a, "a");
  require_positive(b, "b");
  return UtilityFunction(Sigmoidal{a, b});
}

UtilityFunction UtilityFunction::logarithmic(double k, double r_max) {
  require_positive(k, "k");
  require_positive(r_max, "r_max");
  return UtilityFunction(Logarithmic{k, r_max});
}

double evaluate(const UtilityFunction& u, double rate) {
  require_rate(rate);
  if (rate == 0.0) return 0.0;
  if (const auto* s = std::get_if<Sigmoidal>(&u.shape())) return sigmoid_value(*s, rate);
  const auto& l = std::get<Logarithmic>(u.shape());
  if (rate >= l.r_max) return 1.0;
  return std::log1p(l.k * rate) / log_norm(l);
}

double log_utility(const UtilityFunction& u, double rate) {
  require_rate(rate);
  if (const auto* s = std::get_if<Sigmoidal>(&u.shape())) return sigmoid_log_value(*s, rate);
  const auto& l = std::get<Logarithmic>(u.shape());
  if (rate == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::log1p(l.k * rate)) - std::log(log_norm(l));
}

double log_marginal(const UtilityFunction& u, double rate) {
  if (!(rate > 0.0)) {
    throw DomainError("log_marginal requires rate > 0, got " + std::to_string(rate));
  }
  if (const auto* s = std::get_if<Sigmoidal>(&u.shape())) return sigmoid_log_marginal(*s, rate);
  const auto& l = std::get<Logarithmic>(u.shape());
  const double kr = l.k * rate;
  return l.k / ((1.0 + kr) * std::log1p(kr));
}

double inverse_log_marginal(const UtilityFunction& u, double price, double rate_cap,
                            const InnerSolveOptions& opts) {
  if (!std::isfinite(price) || !(price > 0.0)) {
    throw DomainError("price must be positive and finite, got " + std::to_string(price));
  }
  if (!(rate_cap > 0.0)) {
    throw DomainError("rate cap must be positive, got " + std::to_string(rate_cap));
  }
  const double floor = opts.rate_floor;
  if (rate_cap <= floor) return rate_cap;
  if (log_marginal(u, rate_cap) >= price) return rate_cap;
  if (log_marginal(u, floor) <= price) return floor;

  // Invariant: marginal(lo) > price >= marginal(hi).
  double lo = floor;
  double hi = rate_cap;
  for (int i = 0; i < opts.max_iterations && hi - lo > opts.tolerance; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (log_marginal(u, mid) > price) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

double net_benefit_maximizer(const UtilityFunction& u, double price, double offset,
                             double rate_cap, const InnerSolveOptions& opts) {
  if (std::isnan(offset) || offset < 0.0) {
    throw DomainError("offset must be >= 0, got " + std::to_string(offset));
  }
  const double x = inverse_log_marginal(u, price, rate_cap + offset, opts);
  return x > offset ? x - offset : 0.0;
}

}  // namespace ca
