#pragma once

#include <variant>

#include "ca/types.hpp"

namespace ca {

/// Normalized sigmoidal utility c * (1 / (1 + exp(-a (r - b))) - d).
///
/// `a` is the steepness and `b` the inflection rate. The normalizers are
/// chosen so that U(0) = 0 and U(r) -> 1 as r grows.
struct Sigmoidal {
  double a = 0.0;
  double b = 0.0;

  /// c = 1 + exp(-ab), the overflow-free form of (1 + e^{ab}) / e^{ab}.
  double c() const;
  /// d = exp(-ab) / (1 + exp(-ab)), equal to 1 / (1 + e^{ab}).
  double d() const;

  friend bool operator==(const Sigmoidal&, const Sigmoidal&) = default;
};

/// Normalized logarithmic utility log(1 + k r) / log(1 + k r_max).
struct Logarithmic {
  double k = 0.0;
  double r_max = 0.0;

  friend bool operator==(const Logarithmic&, const Logarithmic&) = default;
};

/// An application utility. Construct through the named factories, which
/// reject non-positive parameters.
class UtilityFunction {
 public:
  using Shape = std::variant<Sigmoidal, Logarithmic>;

  static UtilityFunction sigmoidal(double a, double b);
  static UtilityFunction logarithmic(double k, double r_max);

  const Shape& shape() const { return shape_; }
  bool is_sigmoidal() const { return std::holds_alternative<Sigmoidal>(shape_); }

  friend bool operator==(const UtilityFunction&, const UtilityFunction&) = default;

 private:
  explicit UtilityFunction(Shape s) : shape_(s) {}
  Shape shape_;
};

/// Settings for the inner one-dimensional solve.
struct InnerSolveOptions {
  /// Smallest rate the solver will return; log U is -inf at zero.
  double rate_floor = 1e-9;
  /// Bisection stops once the bracket is this narrow (rate units).
  double tolerance = 1e-9;
  int max_iterations = 200;
};

/// U(r) in [0, 1]. Logarithmic utilities saturate at 1 beyond r_max.
/// Throws DomainError for r < 0 or NaN.
double evaluate(const UtilityFunction& u, double rate);

/// log U(r) as used by the allocation objective.
///
/// For logarithmic utilities this is the analytic continuation
/// log(log(1 + k r) / log(1 + k r_max)) and keeps growing past r_max, so it
/// stays consistent with log_marginal(). Returns -inf at r = 0.
double log_utility(const UtilityFunction& u, double rate);

/// U'(r) / U(r), strictly decreasing in r. Throws DomainError unless r > 0.
double log_marginal(const UtilityFunction& u, double rate);

/// Solves log_marginal(r) = price on [rate_floor, rate_cap] by bisection.
///
/// Returns rate_cap when the price is too low to bind inside the cap and
/// rate_floor when even the floor's marginal is below the price.
double inverse_log_marginal(const UtilityFunction& u, double price, double rate_cap,
                            const InnerSolveOptions& opts = {});

/// argmax over r >= 0 of log U(r + offset) - price * r.
///
/// Equals max(0, x - offset) where x = inverse_log_marginal(u, price,
/// rate_cap + offset).
double net_benefit_maximizer(const UtilityFunction& u, double price, double offset,
                             double rate_cap, const InnerSolveOptions& opts = {});

}  // namespace ca
