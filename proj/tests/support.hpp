#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ca/model.hpp"

namespace ca::test {

// Direct long-double evaluation of the closed forms, kept apart from the
// library's stable rewrites so the two can be checked against each other.
inline long double ref_utility(const UtilityFunction& u, long double r) {
  if (const auto* s = std::get_if<Sigmoidal>(&u.shape())) {
    const long double a = s->a;
    const long double b = s->b;
    const long double c = (1.0L + std::exp(a * b)) / std::exp(a * b);
    const long double d = 1.0L / (1.0L + std::exp(a * b));
    return c * (1.0L / (1.0L + std::exp(-a * (r - b))) - d);
  }
  const auto& l = std::get<Logarithmic>(u.shape());
  return std::log(1.0L + l.k * r) / std::log(1.0L + l.k * static_cast<long double>(l.r_max));
}

inline long double ref_log_marginal(const UtilityFunction& u, long double r) {
  if (const auto* s = std::get_if<Sigmoidal>(&u.shape())) {
    const long double a = s->a;
    const long double b = s->b;
    const long double c = (1.0L + std::exp(a * b)) / std::exp(a * b);
    const long double sig = 1.0L / (1.0L + std::exp(-a * (r - b)));
    return c * a * sig * (1.0L - sig) / ref_utility(u, r);
  }
  const auto& l = std::get<Logarithmic>(u.shape());
  return l.k / ((1.0L + l.k * r) * std::log(1.0L + l.k * r));
}

// Argmax of f over `points` evenly spaced samples of [lo, hi].
inline double grid_argmax(const std::function<double(double)>& f, double lo, double hi,
                          int points) {
  double best = lo;
  double best_value = -INFINITY;
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    const double v = f(x);
    if (v > best_value) {
      best_value = v;
      best = x;
    }
  }
  return best;
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) {
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
  }
  return g;
}

inline std::vector<UtilityFunction> preset_utilities() {
  std::vector<UtilityFunction> out;
  const auto preset = preset_section5();
  for (const auto& u : preset.users()) out.push_back(u.utility);
  return out;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Rows of a CSV without quoting, header excluded.
inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& p) {
  std::istringstream in(read_text(p));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ca_tests_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace ca::test
