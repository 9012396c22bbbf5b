#include "pdfw/metrics_csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pdfw {

namespace {

void append_real(std::string& out, double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

double parse_real(const std::string& field, const std::string& where) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw IoError(where + ": cannot parse '" + field + "' as a number");
  }
  return v;
}

}  // namespace

std::string format_metrics_csv(const ConvergenceRecord& record) {
  if (record.empty()) throw ContractViolation("metrics record is empty");
  std::string out = kMetricsHeader;
  out += '\n';
  for (const auto& r : record.rows()) {
    out += std::to_string(r.k);
    for (double v : {r.cost, r.normalized_cost, r.rmsd, r.wall_seconds}) {
      out += ',';
      append_real(out, v);
    }
    out += '\n';
  }
  return out;
}

void emit_metrics_csv(const ConvergenceRecord& record, const std::filesystem::path& path) {
  const std::string text = format_metrics_csv(record);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw IoError(path.string() + ": write failed");
}

ConvergenceRecord read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) {
    throw IoError(path.string() + ": missing or unexpected header");
  }
  ConvergenceRecord record;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (fields.size() != 5) throw IoError(where + ": expected 5 fields");
    ConvergenceRow row;
    row.k = static_cast<std::size_t>(parse_real(fields[0], where));
    row.cost = parse_real(fields[1], where);
    row.normalized_cost = parse_real(fields[2], where);
    row.rmsd = parse_real(fields[3], where);
    row.wall_seconds = parse_real(fields[4], where);
    record.add(row);
  }
  return record;
}

}  // namespace pdfw
