#include "lowvolt/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace lowvolt {
namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 460;
constexpr double kLeft = 70;
constexpr double kRight = 190;
constexpr double kTop = 40;
constexpr double kBottom = 50;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double x, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double quantity(const PlanRow<double>& row, PlotAxis axis) {
  return axis == PlotAxis::Energy ? row.e_j : row.v_p;
}

}  // namespace

std::string render_svg(const std::vector<OperatingPlan<double>>& plans, PlotAxis axis) {
  int p_lo = std::numeric_limits<int>::max();
  int p_hi = std::numeric_limits<int>::min();
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -y_lo;
  for (const auto& plan : plans)
    for (const auto& row : plan.rows) {
      if (!row.feasible()) continue;
      const double q = quantity(row, axis);
      if (axis == PlotAxis::Energy && !(q > 0)) continue;
      p_lo = std::min(p_lo, row.p);
      p_hi = std::max(p_hi, row.p);
      y_lo = std::min(y_lo, q);
      y_hi = std::max(y_hi, q);
    }
  if (p_lo > p_hi) throw Error(ErrorKind::NoFeasibleData, "emit_svg: no feasible rows to plot");

  // Axis bounds: whole decades for energy, 0.1 V steps for voltage.
  double lo = 0, hi = 0;
  std::vector<double> ticks;
  if (axis == PlotAxis::Energy) {
    lo = std::floor(std::log10(y_lo));
    hi = std::ceil(std::log10(y_hi));
    if (hi <= lo) hi = lo + 1;
    for (double d = lo; d <= hi; d += 1) ticks.push_back(d);
  } else {
    lo = std::floor(y_lo * 10) / 10;
    hi = std::ceil(y_hi * 10) / 10;
    if (hi <= lo) hi = lo + 0.1;
    const int steps = static_cast<int>(std::lround((hi - lo) * 10));
    for (int i = 0; i <= steps; ++i) ticks.push_back(lo + i * 0.1);
  }
  const double x_span = p_hi > p_lo ? p_hi - p_lo : 1;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](int p) { return kLeft + (p - p_lo) / x_span * plot_w; };
  auto py = [&](double q) {
    const double t = axis == PlotAxis::Energy ? std::log10(q) : q;
    return kTop + (hi - t) / (hi - lo) * plot_h;
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << fixed(kLeft) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">"
     << (axis == PlotAxis::Energy ? "Energy E (J) vs cores p" : "Supply voltage V (V) vs cores p")
     << "</text>\n";
  os << "<rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\"" << fixed(plot_w)
     << "\" height=\"" << fixed(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

  os << "<g font-family=\"sans-serif\" font-size=\"11\" stroke=\"#ddd\">\n";
  for (double t : ticks) {
    const double y = kTop + (hi - t) / (hi - lo) * plot_h;
    os << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(kLeft + plot_w)
       << "\" y2=\"" << fixed(y) << "\"/>";
    os << "<text x=\"" << fixed(kLeft - 6) << "\" y=\"" << fixed(y + 4)
       << "\" text-anchor=\"end\" stroke=\"none\">"
       << (axis == PlotAxis::Energy ? "1e" + std::to_string(static_cast<int>(t)) : fixed(t, 1)) << "</text>\n";
  }
  const int x_step = std::max(1, (p_hi - p_lo) / 8);
  for (int p = p_lo; p <= p_hi; p += x_step) {
    os << "<text x=\"" << fixed(px(p)) << "\" y=\"" << fixed(kTop + plot_h + 16)
       << "\" text-anchor=\"middle\" stroke=\"none\">" << p << "</text>\n";
  }
  os << "</g>\n";
  os << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"" << fixed(kHeight - 12)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">cores p</text>\n";

  for (std::size_t i = 0; i < plans.size(); ++i) {
    const char* color = kPalette[i % kPalette.size()];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& row : plans[i].rows) {
      if (!row.feasible()) continue;
      const double q = quantity(row, axis);
      if (axis == PlotAxis::Energy && !(q > 0)) continue;
      os << (first ? "" : " ") << fixed(px(row.p)) << ',' << fixed(py(q));
      first = false;
    }
    os << "\"/>\n";
    const double ly = kTop + 14 + 18 * static_cast<double>(i);
    std::ostringstream label;
    label << plans[i].model_summary << ", t_r=" << plans[i].target.t_r;
    os << "<line x1=\"" << fixed(kWidth - kRight + 12) << "\" y1=\"" << fixed(ly - 4) << "\" x2=\""
       << fixed(kWidth - kRight + 32) << "\" y2=\"" << fixed(ly - 4) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>";
    os << "<text x=\"" << fixed(kWidth - kRight + 36) << "\" y=\"" << fixed(ly)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(label.str()) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_svg(const std::vector<OperatingPlan<double>>& plans, PlotAxis axis,
              const std::filesystem::path& path) {
  const std::string text = render_svg(plans, axis);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "emit_svg: cannot write " + path.string());
  out << text;
}

}  // namespace lowvolt
