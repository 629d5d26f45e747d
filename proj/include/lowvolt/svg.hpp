#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lowvolt/planner.hpp"

namespace lowvolt {

enum class PlotAxis { Energy, Voltage };

/// Standalone SVG line chart of one quantity against core count, one
/// polyline per plan over its feasible rows. Energy uses a log10 vertical
/// axis, voltage a linear one. Output depends only on the inputs.
std::string render_svg(const std::vector<OperatingPlan<double>>& plans, PlotAxis axis);

void emit_svg(const std::vector<OperatingPlan<double>>& plans, PlotAxis axis,
              const std::filesystem::path& path);

}  // namespace lowvolt
