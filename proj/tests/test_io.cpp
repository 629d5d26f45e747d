#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "lowvolt/config.hpp"
#include "lowvolt/io.hpp"
#include "lowvolt/svg.hpp"

using namespace lowvolt;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

const auto kChip = ChipParams<double>::reference();
const auto kRef = ReferencePoint<double>::reference();

OperatingPlan<double> amdahl_sweep(double f, double t_r) {
  return sweep(kChip, kRef, SpeedupModel<double>{AmdahlSpeedup<double>{f}}, TargetSpec<double>{t_r}, {1, 64});
}

bool same(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

std::vector<std::vector<std::pair<double, double>>> polylines(const std::string& svg) {
  std::vector<std::vector<std::pair<double, double>>> out;
  const std::regex line_re("<polyline[^>]*points=\"([^\"]*)\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), line_re); it != std::sregex_iterator(); ++it) {
    std::vector<std::pair<double, double>> pts;
    std::istringstream ss((*it)[1].str());
    std::string tok;
    while (ss >> tok) {
      const auto comma = tok.find(',');
      pts.emplace_back(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
    }
    out.push_back(pts);
  }
  return out;
}

}  // namespace

TEST_CASE("format_number round-trips doubles") {
  for (double x : {0.1, 1.0 / 3, 3200386342.693644, 1e-300, 6.02214076e23}) {
    CHECK(std::stod(format_number(x)) == x);
  }
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("plan CSV schema and round-trip") {
  for (double t_r : {0.01, 0.25, 1.0}) {
    const auto plan = amdahl_sweep(0.9, t_r);
    std::stringstream ss;
    write_plan_csv(ss, plan.rows);
    std::string header;
    std::getline(std::istringstream(ss.str()), header);
    CHECK(header == std::string(kPlanCsvHeader));
    const auto back = parse_plan_csv(ss);
    REQUIRE(back.size() == plan.rows.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      const auto& a = plan.rows[i];
      const auto& b = back[i];
      CHECK(a.p == b.p);
      CHECK(same(a.s_p, b.s_p));
      CHECK(same(a.f_p, b.f_p));
      CHECK(same(a.v_p, b.v_p));
      CHECK(same(a.power.dynamic_w, b.power.dynamic_w));
      CHECK(same(a.power.leakage_w, b.power.leakage_w));
      CHECK(same(a.power.total_w, b.power.total_w));
      CHECK(same(a.t_p, b.t_p));
      CHECK(same(a.e_j, b.e_j));
      CHECK(a.feasibility == b.feasibility);
    }
  }
}

TEST_CASE("CSV parse errors") {
  std::istringstream bad_header("p,speedup\n1,1\n");
  CHECK_THROWS_AS(parse_speedup_table(bad_header), Error);
  std::istringstream bad_number("p,s_p\n1,one\n");
  try {
    parse_speedup_table(bad_number, "t.csv");
    FAIL("expected DataFormat");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DataFormat);
    CHECK(std::string(e.what()).find("t.csv:2") != std::string::npos);
  }
  std::istringstream short_row("v,f,p_w\n1,2\n");
  CHECK_THROWS_AS(parse_power_samples(short_row), Error);
  CHECK_THROWS_AS(read_vf_samples("/nonexistent/file.csv"), Error);
}

TEST_CASE("sample and table fixtures load") {
  const fs::path dir = LOWVOLT_FIXTURES;
  CHECK(read_vf_samples(dir / "vf_samples.csv").size() == 5);
  CHECK(read_power_samples(dir / "power_samples.csv").size() == 3);
  const auto t = read_speedup_table(dir / "speedup3.csv");
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[1].p == 4);
  CHECK(t.rows[1].s_p == 3.2);
}

TEST_CASE("config: empty object yields reference defaults") {
  const auto cfg = parse_config("{}");
  CHECK(cfg.chip == ChipParams<double>::reference());
  CHECK(cfg.chip.v_th == 0.23);
  CHECK(cfg.reference.f_s == 3.2e9);
  CHECK(cfg.reference.v_s == 1.2);
  CHECK(cfg.targets.size() == 1);
  CHECK(cfg.targets[0].t_r == 1.0);
  CHECK(cfg.p_range == CoreRange{1, 64});
  CHECK(cfg == RunConfig{});
}

TEST_CASE("config: invalid threshold ordering") {
  try {
    load_config(fs::path(LOWVOLT_FIXTURES) / "bad_vth.json");
    FAIL("expected Validation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    CHECK(std::string(e.what()).find("v_th < v_min < v_max violated") != std::string::npos);
  }
}

TEST_CASE("config: all violations are reported together") {
  try {
    parse_config(R"({"chip": {"k2": -1, "h": 0.5}, "targets": [0], "p_range": [0, 4], "bogus": 1})");
    FAIL("expected Validation");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("chip.k2") != std::string::npos);
    CHECK(msg.find("chip.h") != std::string::npos);
    CHECK(msg.find("targets[0]") != std::string::npos);
    CHECK(msg.find("p_range") != std::string::npos);
    CHECK(msg.find("bogus: unknown field") != std::string::npos);
  }
}

TEST_CASE("config: parse errors carry position") {
  try {
    parse_config("{\n  \"chip\": {\n    \"k2\": ,\n  }\n}");
    FAIL("expected Parse");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  try {
    parse_config(R"({"chip": {"k2": "fast"}})");
    FAIL("expected Validation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    CHECK(std::string(e.what()).find("chip.k2: expected a number") != std::string::npos);
  }
}

TEST_CASE("config: speedup table truncates the sweep range") {
  const auto cfg = load_config(fs::path(LOWVOLT_FIXTURES) / "table_config.json");
  REQUIRE(std::holds_alternative<TableSpeedup<double>>(cfg.speedup));
  CHECK(cfg.p_range == CoreRange{1, 8});
  const auto plan = sweep(cfg.chip, cfg.reference, cfg.speedup, cfg.targets[0], cfg.p_range);
  CHECK(plan.rows.size() == 8);
  CHECK_THROWS_AS(parse_config(R"({"speedup": {"table": "missing.csv"}})", LOWVOLT_FIXTURES), Error);
}

TEST_CASE("config: omitted v_min and v_max follow v_th and v_s") {
  const auto cfg = parse_config(R"({"chip": {"v_th": 0.3}, "reference": {"v_s": 1.1, "f_s": 2.5e9}})");
  CHECK(cfg.chip.v_min == Approx(0.31));
  CHECK(cfg.chip.v_max == 1.1);
}

TEST_CASE("config: dump and reload is identical") {
  const auto a = load_config(fs::path(LOWVOLT_FIXTURES) / "table_config.json");
  const auto b = parse_config(dump_config(a));
  CHECK(a == b);
  const auto c = parse_config(R"({"chip": {"dyn_const": 2.1234567890123457e-8, "v_min": 0.3},
                                  "speedup": {"amdahl": 0.987654321},
                                  "targets": [0.25, 0.5, 1.0], "p_range": [2, 48],
                                  "output": {"dir": "x", "svg": true},
                                  "validate": {"fractions": [0.7], "tolerance": 1e-10}})");
  CHECK(parse_config(dump_config(c)) == c);
}

TEST_CASE("svg: energy polyline minimum sits at optimal_p") {
  for (double f : {0.5, 0.9, 0.99, 1.0}) {
    const auto plan = amdahl_sweep(f, 1.0);
    const auto svg = render_svg({plan}, PlotAxis::Energy);
    const auto lines = polylines(svg);
    REQUIRE(lines.size() == 1);
    REQUIRE(lines[0].size() == 64);
    // Screen y grows downward: lowest energy has the largest y.
    std::size_t lowest = 0;
    for (std::size_t i = 1; i < lines[0].size(); ++i)
      if (lines[0][i].second > lines[0][lowest].second) lowest = i;
    // Coordinates are rounded to 0.01 px; neighbours of the optimum may tie.
    const int p_at_lowest = plan.rows[lowest].p;
    CHECK(std::abs(p_at_lowest - *plan.optimal_p) <= 1);
    CHECK(lines[0][static_cast<std::size_t>(*plan.optimal_p - 1)].second == lines[0][lowest].second);
  }
}

TEST_CASE("svg: voltage curves at t_r = 0.25") {
  std::vector<OperatingPlan<double>> plans;
  for (double f : {0.5, 0.9, 0.99, 1.0}) plans.push_back(amdahl_sweep(f, 0.25));
  const auto lines = polylines(render_svg(plans, PlotAxis::Voltage));
  REQUIRE(lines.size() == 4);
  // f = 0.5 cannot meet t_r = 0.25 at any p: empty polyline.
  CHECK(lines[0].empty());
  for (std::size_t k = 1; k < lines.size(); ++k) {
    REQUIRE_FALSE(lines[k].empty());
    for (std::size_t i = 1; i < lines[k].size(); ++i) {
      CHECK(lines[k][i].first > lines[k][i - 1].first);
      CHECK(lines[k][i].second >= lines[k][i - 1].second);  // voltage non-increasing
    }
  }
  // At p = 64 (last point) higher f sits lower on the chart.
  CHECK(lines[3].back().second > lines[2].back().second);
  CHECK(lines[2].back().second > lines[1].back().second);
}

TEST_CASE("svg: deterministic bytes and no-data error") {
  const fs::path dir = fs::temp_directory_path() / "lowvolt_svg_test";
  fs::create_directories(dir);
  const std::vector<OperatingPlan<double>> plans{amdahl_sweep(0.9, 1.0), amdahl_sweep(0.99, 0.5)};
  emit_svg(plans, PlotAxis::Energy, dir / "a.svg");
  emit_svg(plans, PlotAxis::Energy, dir / "b.svg");
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK(slurp(dir / "a.svg") == slurp(dir / "b.svg"));
  CHECK(slurp(dir / "a.svg").rfind("<svg", 0) == 0);

  try {
    render_svg({amdahl_sweep(0.9, 0.01)}, PlotAxis::Energy);
    FAIL("expected NoFeasibleData");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoFeasibleData);
  }
  fs::remove_all(dir);
}
