#include "lowvolt/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lowvolt {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void fail(std::string_view source, int line, const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line << ": " << what;
  throw Error(ErrorKind::DataFormat, msg.str());
}

double parse_double(std::string_view field, std::string_view source, int line) {
  double value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) fail(source, line, "bad number '" + std::string(field) + "'");
  return value;
}

int parse_int(std::string_view field, std::string_view source, int line) {
  int value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) fail(source, line, "bad integer '" + std::string(field) + "'");
  return value;
}

// Calls `row(fields, line_no)` for each data line after checking the header.
template <typename RowFn>
void read_csv(std::istream& in, std::string_view source, std::string_view header, RowFn&& row) {
  const auto expected = split(header);
  std::string line;
  int line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = split(text);
    if (!seen_header) {
      if (fields != expected) fail(source, line_no, "expected header '" + std::string(header) + "'");
      seen_header = true;
      continue;
    }
    if (fields.size() != expected.size())
      fail(source, line_no, "expected " + std::to_string(expected.size()) + " fields");
    row(fields, line_no);
  }
  if (!seen_header) fail(source, line_no, "missing header '" + std::string(header) + "'");
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return in;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

TableSpeedup<double> parse_speedup_table(std::istream& in, std::string_view source) {
  TableSpeedup<double> table;
  read_csv(in, source, "p,s_p", [&](const auto& f, int line) {
    table.rows.push_back({parse_int(f[0], source, line), parse_double(f[1], source, line)});
  });
  return table;
}

TableSpeedup<double> read_speedup_table(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_speedup_table(in, path.string());
}

std::vector<VFSample<double>> parse_vf_samples(std::istream& in, std::string_view source) {
  std::vector<VFSample<double>> out;
  read_csv(in, source, "v,f_max", [&](const auto& f, int line) {
    out.push_back({parse_double(f[0], source, line), parse_double(f[1], source, line)});
  });
  return out;
}

std::vector<VFSample<double>> read_vf_samples(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_vf_samples(in, path.string());
}

std::vector<PowerSample<double>> parse_power_samples(std::istream& in, std::string_view source) {
  std::vector<PowerSample<double>> out;
  read_csv(in, source, "v,f,p_w", [&](const auto& f, int line) {
    out.push_back({parse_double(f[0], source, line), parse_double(f[1], source, line),
                   parse_double(f[2], source, line)});
  });
  return out;
}

std::vector<PowerSample<double>> read_power_samples(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_power_samples(in, path.string());
}

void write_plan_csv(std::ostream& out, const std::vector<PlanRow<double>>& rows) {
  out << kPlanCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.p << ',' << format_number(r.s_p) << ',' << format_number(r.f_p) << ','
        << format_number(r.v_p) << ',' << format_number(r.power.dynamic_w) << ','
        << format_number(r.power.leakage_w) << ',' << format_number(r.power.total_w) << ','
        << format_number(r.t_p) << ',' << format_number(r.e_j) << ','
        << (r.feasible() ? "true" : "false") << ',' << to_string(r.feasibility) << '\n';
  }
}

std::vector<PlanRow<double>> parse_plan_csv(std::istream& in, std::string_view source) {
  std::vector<PlanRow<double>> rows;
  read_csv(in, source, kPlanCsvHeader, [&](const auto& f, int line) {
    PlanRow<double> r;
    r.p = parse_int(f[0], source, line);
    r.s_p = parse_double(f[1], source, line);
    r.f_p = parse_double(f[2], source, line);
    r.v_p = parse_double(f[3], source, line);
    r.power.dynamic_w = parse_double(f[4], source, line);
    r.power.leakage_w = parse_double(f[5], source, line);
    r.power.total_w = parse_double(f[6], source, line);
    r.t_p = parse_double(f[7], source, line);
    r.e_j = parse_double(f[8], source, line);
    if (f[10] == to_string(Feasibility::Ok))
      r.feasibility = Feasibility::Ok;
    else if (f[10] == to_string(Feasibility::ExceedsVmaxCap))
      r.feasibility = Feasibility::ExceedsVmaxCap;
    else if (f[10] == to_string(Feasibility::BelowVminFloor))
      r.feasibility = Feasibility::BelowVminFloor;
    else
      fail(source, line, "unknown reason '" + std::string(f[10]) + "'");
    const bool feasible = f[9] == "true";
    if (!feasible && f[9] != "false") fail(source, line, "feasible must be true or false");
    if (feasible != r.feasible()) fail(source, line, "feasible flag contradicts reason");
    rows.push_back(r);
  });
  return rows;
}

}  // namespace lowvolt
