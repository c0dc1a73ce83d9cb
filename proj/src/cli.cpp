#include "ca/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <ostream>
#include <sstream>

#include "ca/protocol.hpp"
#include "ca/report_io.hpp"

namespace ca {
namespace {

double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(v)) {
    throw ValidationError(std::string(what) + ": not a number: '" + std::string(text) + "'");
  }
  return v;
}

CarrierId parse_carrier(std::string_view text, std::string_view what) {
  std::int64_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ValidationError(std::string(what) + ": not a carrier id: '" + std::string(text) + "'");
  }
  return CarrierId(v);
}

std::string_view after_equals(std::string_view text, std::string_view what, CarrierId& id) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw ValidationError(std::string(what) + ": expected '<id>=...', got '" + std::string(text) + "'");
  }
  id = parse_carrier(text.substr(0, eq), what);
  return text.substr(eq + 1);
}

void write_trace(const std::filesystem::path& dir, CarrierId id, const char* phase,
                 const ConvergenceTrace& trace) {
  std::ostringstream name;
  name << "trace_" << id << '_' << phase << ".csv";
  write_file(dir / name.str(), trace_csv(trace));
}

int report_error(const std::exception& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return exit_code_for(e);
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

}  // namespace

void SweepSpec::validate() const {
  if (!(step > 0.0)) throw ValidationError("sweep: step must be positive");
  if (!(start <= stop)) throw ValidationError("sweep: start must not exceed stop");
  if (!(start > 0.0)) throw ValidationError("sweep: capacities must be positive");
}

std::vector<double> SweepSpec::values() const {
  validate();
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

SweepSpec parse_sweep_spec(std::string_view text) {
  SweepSpec spec;
  auto range = after_equals(text, "--sweep", spec.carrier);
  const auto c1 = range.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : range.find(':', c1 + 1);
  if (c2 == std::string_view::npos) {
    throw ValidationError("--sweep: expected '<id>=<start>:<stop>:<step>', got '" +
                          std::string(text) + "'");
  }
  spec.start = parse_double(range.substr(0, c1), "--sweep start");
  spec.stop = parse_double(range.substr(c1 + 1, c2 - c1 - 1), "--sweep stop");
  spec.step = parse_double(range.substr(c2 + 1), "--sweep step");
  spec.validate();
  return spec;
}

std::pair<CarrierId, double> parse_capacity_override(std::string_view text) {
  CarrierId id;
  const double value = parse_double(after_equals(text, "--set-capacity", id), "--set-capacity");
  return {id, value};
}

void RunConfig::validate() const {
  if (scenario_path && preset) throw ValidationError("give either a scenario file or a preset, not both");
  if (!scenario_path && !preset) throw ValidationError("no scenario: pass a scenario file or --preset");
  if (preset && *preset != "section5") throw ValidationError("unknown preset '" + *preset + "'");
  if (sweep) sweep->validate();
}

Scenario resolve_scenario(const RunConfig& config) {
  config.validate();
  Scenario scenario = config.preset ? preset_section5() : load_scenario(*config.scenario_path);
  for (const auto& [id, capacity] : config.capacity_overrides) {
    scenario = scenario.with_capacity(id, capacity);
  }
  return scenario;
}

SolverParams resolve_params(const RunConfig& config) {
  SolverParams params;
  if (config.delta) params.delta = *config.delta;
  if (config.l1) params.l1 = *config.l1;
  if (config.l2) params.l2 = *config.l2;
  if (config.max_iters) params.max_outer_iters = *config.max_iters;
  params.validate();
  return params;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ValidationError*>(&e) ||
      dynamic_cast<const DomainError*>(&e)) {
    return kExitInput;
  }
  if (dynamic_cast<const ConvergenceError*>(&e)) return kExitNoConvergence;
  if (dynamic_cast<const ProtocolError*>(&e)) return kExitProtocol;
  return kExitUsage;
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Scenario scenario = resolve_scenario(config);
    const SolverParams params = resolve_params(config);
    const AllocationReport report = run(scenario, params);

    ensure_dir(config.out_dir);
    write_file(config.out_dir / "allocations.csv", allocations_csv(report));
    write_file(config.out_dir / "aggregates.csv", aggregates_csv(report));
    write_file(config.out_dir / "prices.csv", prices_csv(report));
    for (const auto& c : report.carriers) {
      write_trace(config.out_dir, c.id, "offered", c.offered.trace);
      write_trace(config.out_dir, c.id, "allocation", c.allocation.trace);
    }

    if (config.verbosity > 0) {
      for (const auto& c : report.carriers) {
        out << "carrier " << c.id << ": offered " << format_number(c.offered.shadow_price) << " ("
            << c.offered.iterations << " iterations), allocation "
            << format_number(c.allocation.shadow_price) << " (" << c.allocation.iterations
            << " iterations)\n";
      }
      for (const auto& [uid, r] : report.aggregates) {
        out << "user " << uid << ": r_agg " << format_number(r) << '\n';
      }
    }
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error(e, err);
  }
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (!config.sweep) throw ValidationError("sweep: missing --sweep <id>=<start>:<stop>:<step>");
    const Scenario scenario = resolve_scenario(config);
    const SolverParams params = resolve_params(config);
    const SweepSpec& spec = *config.sweep;
    scenario.carrier(spec.carrier);
    const auto capacities = spec.values();

    std::vector<std::future<AllocationReport>> jobs;
    for (const double r : capacities) {
      jobs.push_back(std::async(std::launch::async, [&scenario, &params, &spec, r] {
        return run(scenario.with_capacity(spec.carrier, r), params);
      }));
    }

    std::vector<SweepRow> rows;
    int status = kExitOk;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      SweepRow row;
      row.capacity = capacities[i];
      try {
        row.report = jobs[i].get();
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
        err << "capacity " << format_number(row.capacity) << ": " << e.what() << '\n';
        if (status == kExitOk) status = exit_code_for(e);
      }
      rows.push_back(std::move(row));
    }

    std::vector<CarrierId> carriers;
    for (const auto& c : scenario.carriers()) carriers.push_back(c.id);
    std::sort(carriers.begin(), carriers.end());
    std::vector<UserId> users;
    for (const auto& u : scenario.users()) users.push_back(u.id);
    std::sort(users.begin(), users.end());

    ensure_dir(config.out_dir);
    write_file(config.out_dir / "sweep_prices.csv", sweep_prices_csv(rows, carriers));
    write_file(config.out_dir / "sweep_aggregates.csv", sweep_aggregates_csv(rows, users));

    if (config.verbosity > 0) {
      out << rows.size() << " sweep points written to " << config.out_dir.string() << '\n';
    }
    return status;
  } catch (const std::exception& e) {
    return report_error(e, err);
  }
}

}  // namespace ca
