#include "ca/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ca {
namespace {

struct Term {
  const UtilityFunction* utility;
  double offset;
  double floor;

  double value(double r) const { return log_utility(*utility, std::max(r + offset, floor)); }
  double slope(double r) const { return log_marginal(*utility, std::max(r + offset, floor)); }
};

double total(const std::vector<double>& r) { return std::accumulate(r.begin(), r.end(), 0.0); }

double objective(const std::vector<Term>& terms, const std::vector<double>& r) {
  double sum = 0.0;
  for (std::size_t j = 0; j < terms.size(); ++j) sum += terms[j].value(r[j]);
  return sum;
}

// Euclidean projection onto {r >= 0, sum r <= cap}.
std::vector<double> project(std::vector<double> v, double cap) {
  std::vector<double> clipped(v.size());
  std::transform(v.begin(), v.end(), clipped.begin(), [](double x) { return std::max(x, 0.0); });
  if (total(clipped) <= cap) return clipped;

  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    running += sorted[i];
    const double t = (running - cap) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) theta = t;
  }
  for (auto& x : v) x = std::max(x - theta, 0.0);
  return v;
}

// Maximizer of a concave function on [lo, hi].
template <typename F>
double golden_section(F&& f, double lo, double hi) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < 200 && b - a > 1e-13 * (1.0 + std::abs(b)); ++i) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    }
  }
  // Endpoints matter when the optimum sits on the boundary.
  const double mid = 0.5 * (a + b);
  double best = mid;
  double best_value = f(mid);
  for (const double x : {lo, hi}) {
    const double v = f(x);
    if (v > best_value) {
      best = x;
      best_value = v;
    }
  }
  return best;
}

}  // namespace

double centralized_objective(const CentralizedInstance& instance,
                             const std::map<UserId, double>& rates, double rate_floor) {
  double sum = 0.0;
  for (const auto& e : instance.entries) {
    sum += log_utility(e.utility, std::max(rates.at(e.user) + e.offset, rate_floor));
  }
  return sum;
}

std::map<UserId, double> solve_centralized(const CentralizedInstance& instance, double tolerance,
                                           const OracleOptions& options) {
  const auto& entries = instance.entries;
  const double cap = instance.capacity;
  if (entries.empty()) throw ValidationError("solve_centralized: no entries");
  if (!(cap > 0.0)) throw ValidationError("solve_centralized: capacity must be positive");

  const std::size_t m = entries.size();
  std::vector<Term> terms;
  for (const auto& e : entries) terms.push_back({&e.utility, e.offset, options.rate_floor});

  std::vector<double> r(m, cap / static_cast<double>(m));
  std::vector<double> best = r;
  double best_value = objective(terms, r);

  const double step0 = cap / 10.0;
  std::vector<double> grad(m);
  for (int t = 1; t <= options.gradient_iterations; ++t) {
    double norm = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      grad[j] = terms[j].slope(r[j]);
      norm = std::max(norm, std::abs(grad[j]));
    }
    if (!(norm > 0.0)) break;
    const double step = step0 / std::sqrt(static_cast<double>(t));
    for (std::size_t j = 0; j < m; ++j) r[j] += step * grad[j] / norm;
    r = project(std::move(r), cap);
    const double value = objective(terms, r);
    if (value > best_value) {
      best_value = value;
      best = r;
    }
  }
  r = best;

  // Utilities are increasing, so the capacity constraint is tight.
  const double slack = cap - total(r);
  if (slack > 0.0) {
    std::size_t steepest = 0;
    for (std::size_t j = 1; j < m; ++j) {
      if (terms[j].slope(r[j]) > terms[steepest].slope(r[steepest])) steepest = j;
    }
    r[steepest] += slack;
  }

  for (int sweep = 0; sweep < options.exchange_sweeps && m > 1; ++sweep) {
    double moved = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double pair = r[i] + r[j];
        const double x = golden_section(
            [&](double v) { return terms[i].value(v) + terms[j].value(pair - v); }, 0.0, pair);
        moved = std::max(moved, std::abs(x - r[i]));
        r[i] = x;
        r[j] = pair - x;
      }
    }
    if (moved <= 1e-12 * (1.0 + cap)) break;
  }

  // Keep the computed sum within capacity.
  for (int guard = 0; guard < 8; ++guard) {
    const double excess = total(r) - cap;
    if (!(excess > 0.0)) break;
    auto largest = std::max_element(r.begin(), r.end());
    *largest = std::max(0.0, *largest - std::max(excess, std::abs(*largest) * 1e-16));
  }

  // Stationarity: users holding a positive rate share one log-marginal, and
  // users at zero value the first unit no higher than that.
  const double interior = 1e-8 * (1.0 + cap);
  double hi = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    if (r[j] <= interior) continue;
    const double g = terms[j].slope(r[j]);
    hi = std::max(hi, g);
    lo = std::min(lo, g);
  }
  if (hi > 0.0) {
    double residual = (hi - lo) / hi;
    for (std::size_t j = 0; j < m; ++j) {
      if (r[j] > interior) continue;
      residual = std::max(residual, (terms[j].slope(r[j]) - hi) / hi);
    }
    if (residual > tolerance) {
      throw ConvergenceError("solve_centralized: KKT residual " + std::to_string(residual) +
                             " exceeds tolerance");
    }
  }

  std::map<UserId, double> rates;
  for (std::size_t j = 0; j < m; ++j) rates[entries[j].user] = r[j];
  return rates;
}

Comparison compare(const std::map<UserId, double>& algorithm,
                   const std::map<UserId, double>& oracle, double tolerance) {
  if (algorithm.size() != oracle.size()) {
    throw ValidationError("compare: rate maps cover different users");
  }
  Comparison out;
  bool first = true;
  for (const auto& [uid, r_oracle] : oracle) {
    const auto it = algorithm.find(uid);
    if (it == algorithm.end()) {
      throw ValidationError("compare: user " + std::to_string(uid.value) +
                            " missing from the algorithm's rates");
    }
    const double dev = std::abs(it->second - r_oracle) / std::max(r_oracle, 1.0);
    if (first || dev > out.max_deviation) {
      out.max_deviation = dev;
      out.worst_user = uid;
      first = false;
    }
  }
  out.passed = out.max_deviation <= tolerance;
  return out;
}

}  // namespace ca
