#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ca/enodeb.hpp"
#include "ca/protocol.hpp"

namespace ca {

/// Shortest decimal that parses back to the same double.
std::string format_number(double value);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& text);

/// user_id,carrier_id,rate,offset_used; ordered by user, then carrier.
std::string allocations_csv(const AllocationReport& report);
/// user_id,r_agg
std::string aggregates_csv(const AllocationReport& report);
/// carrier_id,offered_price,allocation_price
std::string prices_csv(const AllocationReport& report);
/// iteration,price,user_id,w,r; one row per user per iteration.
std::string trace_csv(const ConvergenceTrace& trace);

/// One sweep point; `report` is empty when the point failed.
struct SweepRow {
  double capacity = 0.0;
  std::optional<AllocationReport> report;
  std::string status = "ok";
};

/// R_value,p<id>_offered...,status
std::string sweep_prices_csv(const std::vector<SweepRow>& rows,
                             const std::vector<CarrierId>& carriers);
/// R_value,user_id,r_agg,status
std::string sweep_aggregates_csv(const std::vector<SweepRow>& rows,
                                 const std::vector<UserId>& users);

/// Writes `contents` to `path`, replacing it. Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace ca
