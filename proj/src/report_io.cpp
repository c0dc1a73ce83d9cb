#include "ca/report_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace ca {

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw Error("format_number: conversion failed");
  return std::string(buf.data(), end);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (const char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string allocations_csv(const AllocationReport& report) {
  std::map<std::pair<UserId, CarrierId>, Grant> by_user;
  for (const auto& [key, grant] : report.grants) by_user[{key.second, key.first}] = grant;

  std::ostringstream os;
  os << "user_id,carrier_id,rate,offset_used\n";
  for (const auto& [key, grant] : by_user) {
    os << key.first << ',' << key.second << ',' << format_number(grant.rate) << ','
       << format_number(grant.offset) << '\n';
  }
  return os.str();
}

std::string aggregates_csv(const AllocationReport& report) {
  std::ostringstream os;
  os << "user_id,r_agg\n";
  for (const auto& [uid, r] : report.aggregates) os << uid << ',' << format_number(r) << '\n';
  return os.str();
}

std::string prices_csv(const AllocationReport& report) {
  std::ostringstream os;
  os << "carrier_id,offered_price,allocation_price\n";
  for (const auto& c : report.carriers) {
    os << c.id << ',' << format_number(c.offered.shadow_price) << ','
       << format_number(c.allocation.shadow_price) << '\n';
  }
  return os.str();
}

std::string trace_csv(const ConvergenceTrace& trace) {
  std::ostringstream os;
  os << "iteration,price,user_id,w,r\n";
  for (const auto& rec : trace.records) {
    for (std::size_t j = 0; j < trace.users.size(); ++j) {
      os << rec.iteration << ',' << format_number(rec.price) << ',' << trace.users[j] << ','
         << format_number(rec.bids[j]) << ',' << format_number(rec.demands[j]) << '\n';
    }
  }
  return os.str();
}

std::string sweep_prices_csv(const std::vector<SweepRow>& rows,
                             const std::vector<CarrierId>& carriers) {
  std::ostringstream os;
  os << "R_value";
  for (const auto cid : carriers) os << ",p" << cid << "_offered";
  os << ",status\n";
  for (const auto& row : rows) {
    os << format_number(row.capacity);
    for (const auto cid : carriers) {
      os << ',';
      if (row.report) os << format_number(row.report->offered_price(cid));
    }
    os << ',' << csv_field(row.status) << '\n';
  }
  return os.str();
}

std::string sweep_aggregates_csv(const std::vector<SweepRow>& rows,
                                 const std::vector<UserId>& users) {
  std::ostringstream os;
  os << "R_value,user_id,r_agg,status\n";
  for (const auto& row : rows) {
    for (const auto uid : users) {
      os << format_number(row.capacity) << ',' << uid << ',';
      if (row.report) os << format_number(row.report->aggregates.at(uid));
      os << ',' << csv_field(row.status) << '\n';
    }
  }
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << contents;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace ca
