#pragma once

// CSV readers/writers for speedup tables, calibration samples and plans.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lowvolt/calibration.hpp"
#include "lowvolt/planner.hpp"
#include "lowvolt/speedup.hpp"

namespace lowvolt {

/// Plan CSV layout, version 1. Changing the column set bumps the version.
inline constexpr int kPlanCsvVersion = 1;
inline constexpr std::string_view kPlanCsvHeader =
    "p,s_p,f_p_hz,v_p_v,p_dyn_w,p_leak_w,p_total_w,t_p_s,e_j,feasible,reason";

/// 17 significant digits; round-trips every finite double. NaN prints "nan".
std::string format_number(double x);

TableSpeedup<double> read_speedup_table(const std::filesystem::path& path);
TableSpeedup<double> parse_speedup_table(std::istream& in, std::string_view source = "<stream>");

std::vector<VFSample<double>> read_vf_samples(const std::filesystem::path& path);
std::vector<VFSample<double>> parse_vf_samples(std::istream& in, std::string_view source = "<stream>");

std::vector<PowerSample<double>> read_power_samples(const std::filesystem::path& path);
std::vector<PowerSample<double>> parse_power_samples(std::istream& in, std::string_view source = "<stream>");

void write_plan_csv(std::ostream& out, const std::vector<PlanRow<double>>& rows);
std::vector<PlanRow<double>> parse_plan_csv(std::istream& in, std::string_view source = "<stream>");

}  // namespace lowvolt
