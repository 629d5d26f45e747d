#pragma once

// CMOS power and maximum-frequency models for a single core, the inversion
// of the frequency model, and the per-core-count energy evaluation that the
// planner sweeps over. Everything here is a pure function of its inputs.

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lowvolt/error.hpp"

namespace lowvolt {

/// Model constants of one core.
///
/// `dyn_const` is the lumped switched-capacitance product (W / (V^2 Hz)),
/// `i_leak` the leakage current (A). `k2`, `v_th` and `h` shape the
/// maximum-frequency curve `k2 (v - v_th)^h / v`. `v_min`/`v_max` bound the
/// supply voltages the planner may select.
template <typename Scalar = double>
struct ChipParams {
  Scalar dyn_const;
  Scalar i_leak;
  Scalar k2;
  Scalar v_th;
  Scalar h;
  Scalar v_max;
  Scalar v_min;

  /// Reference chip: k2 is stored in hertz-consistent units (4.02e9).
  static ChipParams reference() {
    ChipParams c;
    c.dyn_const = Scalar(1.06e-8);
    c.i_leak = Scalar(7.97e-2);
    c.k2 = Scalar(4.02e9);
    c.v_th = Scalar(0.23);
    c.h = Scalar(1.5);
    c.v_max = Scalar(1.2);
    c.v_min = c.v_th + Scalar(0.01);
    return c;
  }

  /// Invariant violations, each prefixed with `prefix` (a config field path).
  std::vector<std::string> violations(std::string_view prefix = "") const {
    std::vector<std::string> out;
    auto field = [&](const char* name) { return std::string(prefix) + name; };
    auto finite = [](Scalar x) { return std::isfinite(static_cast<double>(x)); };
    if (!finite(dyn_const) || !(dyn_const > 0)) out.push_back(field("dyn_const") + ": must be > 0");
    if (!finite(i_leak) || !(i_leak >= 0)) out.push_back(field("i_leak") + ": must be >= 0");
    if (!finite(k2) || !(k2 > 0)) out.push_back(field("k2") + ": must be > 0");
    if (!finite(v_th) || !(v_th > 0)) out.push_back(field("v_th") + ": must be > 0");
    if (!finite(h) || !(h >= 1)) out.push_back(field("h") + ": must be >= 1");
    if (!finite(v_min) || !finite(v_max) || !(v_th < v_min && v_min < v_max))
      out.push_back(field("v_th") + ", " + field("v_min") + ", " + field("v_max") +
                    ": v_th < v_min < v_max violated");
    return out;
  }

  bool valid() const { return violations().empty(); }

  friend bool operator==(const ChipParams&, const ChipParams&) = default;
};

/// Single-core reference run. `w_cycles` is derived and kept equal to
/// `f_s * t_s`; construct through `make` to keep it that way.
template <typename Scalar = double>
struct ReferencePoint {
  Scalar f_s;
  Scalar v_s;
  Scalar t_s;
  Scalar w_cycles;

  static ReferencePoint make(Scalar f_s, Scalar v_s, Scalar t_s) {
    return ReferencePoint{f_s, v_s, t_s, f_s * t_s};
  }

  static ReferencePoint reference() { return make(Scalar(3.2e9), Scalar(1.2), Scalar(1)); }

  /// Execution time of the reference workload at frequency `f`.
  Scalar time_at(Scalar f) const { return w_cycles / f; }

  std::vector<std::string> violations(const ChipParams<Scalar>& chip,
                                      std::string_view prefix = "") const;

  friend bool operator==(const ReferencePoint&, const ReferencePoint&) = default;
};

template <typename Scalar = double>
struct TargetSpec {
  Scalar t_r{1};

  friend bool operator==(const TargetSpec&, const TargetSpec&) = default;
};

template <typename Scalar = double>
struct PowerBreakdown {
  Scalar dynamic_w{0};
  Scalar leakage_w{0};
  Scalar total_w{0};

  friend bool operator==(const PowerBreakdown&, const PowerBreakdown&) = default;
};

enum class Feasibility { Ok, ExceedsVmaxCap, BelowVminFloor };

inline std::string_view to_string(Feasibility f) noexcept {
  switch (f) {
    case Feasibility::Ok: return "ok";
    case Feasibility::ExceedsVmaxCap: return "frequency-exceeds-vmax-cap";
    case Feasibility::BelowVminFloor: return "below-vmin-floor";
  }
  return "ok";
}

/// One evaluated core count. Rows flagged `ExceedsVmaxCap` carry NaN for
/// every quantity downstream of the voltage (no voltage can reach f_p).
/// Rows flagged `BelowVminFloor` carry the solved values.
template <typename Scalar = double>
struct PlanRow {
  int p{1};
  Scalar s_p{1};
  Scalar f_p{0};
  Scalar v_p{0};
  PowerBreakdown<Scalar> power;
  Scalar t_p{0};
  Scalar e_j{0};
  Feasibility feasibility{Feasibility::Ok};

  bool feasible() const { return feasibility == Feasibility::Ok; }
};

/// Maximum clock frequency sustainable at supply voltage `v`.
template <typename Scalar>
Scalar max_frequency(Scalar v, const ChipParams<Scalar>& chip) {
  if (!(chip.h >= 1)) throw Error(ErrorKind::InvalidParams, "max_frequency: exponent h must be >= 1");
  if (!(v >= chip.v_th)) throw Error(ErrorKind::Domain, "max_frequency: voltage below threshold");
  using std::pow;
  return chip.k2 * pow(v - chip.v_th, chip.h) / v;
}

struct BisectionOptions {
  double abs_tol_v = 1e-9;
  double rel_tol_f = 1e-14;
  int max_iterations = 200;
};

/// Lowest supply voltage whose maximum frequency reaches `f`.
///
/// Bisection on [v_th + 1e-12, v_max]. The frequency curve is strictly
/// increasing there, so the bracket always holds the root. Iteration stops
/// once the bracket is narrower than `abs_tol_v` and the frequency residual
/// is below `rel_tol_f`, or the bracket stops shrinking.
template <typename Scalar>
Scalar min_voltage_for_frequency(Scalar f, const ChipParams<Scalar>& chip,
                                 const BisectionOptions& opt = {}) {
  if (!(f >= 0)) throw Error(ErrorKind::Domain, "min_voltage_for_frequency: negative frequency");
  if (f == 0) return chip.v_th;
  const Scalar cap = max_frequency(chip.v_max, chip);
  if (f > cap) {
    std::ostringstream msg;
    msg << "min_voltage_for_frequency: " << static_cast<double>(f) << " Hz exceeds the "
        << static_cast<double>(cap) << " Hz reachable at v_max";
    throw Error(ErrorKind::Infeasible, msg.str());
  }

  Scalar lo = chip.v_th + Scalar(1e-12);
  Scalar hi = chip.v_max;
  if (max_frequency(lo, chip) >= f) return lo;

  Scalar mid = hi;
  for (int i = 0; i < opt.max_iterations; ++i) {
    mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    const Scalar fm = max_frequency(mid, chip);
    if (fm < f)
      lo = mid;
    else
      hi = mid;
    using std::abs;
    if (hi - lo <= Scalar(opt.abs_tol_v) && abs(fm - f) <= Scalar(opt.rel_tol_f) * f) break;
  }
  return lo + (hi - lo) / 2;
}

template <typename Scalar>
PowerBreakdown<Scalar> core_power(Scalar v, Scalar f, const ChipParams<Scalar>& chip) {
  if (!(v >= 0) || !(f >= 0)) throw Error(ErrorKind::Domain, "core_power: negative voltage or frequency");
  PowerBreakdown<Scalar> out;
  out.dynamic_w = chip.dyn_const * v * v * f;
  out.leakage_w = chip.i_leak * v;
  out.total_w = out.dynamic_w + out.leakage_w;
  return out;
}

/// Per-core clock that makes p cores with speedup `s_p` finish in
/// `t_r * t_s`.
template <typename Scalar>
Scalar required_frequency(Scalar s_p, const TargetSpec<Scalar>& target,
                          const ReferencePoint<Scalar>& ref) {
  return ref.f_s / (s_p * target.t_r);
}

template <typename Scalar>
PlanRow<Scalar> plan_row(int p, Scalar s_p, const TargetSpec<Scalar>& target,
                         const ReferencePoint<Scalar>& ref, const ChipParams<Scalar>& chip) {
  if (p < 1) throw Error(ErrorKind::Domain, "plan_row: core count must be >= 1");
  if (!(s_p >= 1)) throw Error(ErrorKind::Domain, "plan_row: speedup must be >= 1");
  if (!(target.t_r > 0)) throw Error(ErrorKind::Domain, "plan_row: t_r must be > 0");

  PlanRow<Scalar> row;
  row.p = p;
  row.s_p = s_p;
  row.f_p = required_frequency(s_p, target, ref);

  if (row.f_p > max_frequency(chip.v_max, chip)) {
    constexpr Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();
    row.v_p = nan;
    row.power = {nan, nan, nan};
    row.t_p = nan;
    row.e_j = nan;
    row.feasibility = Feasibility::ExceedsVmaxCap;
    return row;
  }

  row.v_p = min_voltage_for_frequency(row.f_p, chip);
  row.power = core_power(row.v_p, row.f_p, chip);
  // Cycle-count invariance: the reference work spread over s_p-times less
  // serial time at f_p.
  row.t_p = ref.w_cycles / (s_p * row.f_p);
  row.e_j = Scalar(p) * row.power.total_w * row.t_p;
  row.feasibility = row.v_p < chip.v_min ? Feasibility::BelowVminFloor : Feasibility::Ok;
  return row;
}

template <typename Scalar>
std::vector<std::string> ReferencePoint<Scalar>::violations(const ChipParams<Scalar>& chip,
                                                            std::string_view prefix) const {
  std::vector<std::string> out;
  auto field = [&](const char* name) { return std::string(prefix) + name; };
  if (!(f_s > 0) || !std::isfinite(static_cast<double>(f_s))) out.push_back(field("f_s") + ": must be > 0");
  if (!(t_s > 0) || !std::isfinite(static_cast<double>(t_s))) out.push_back(field("t_s") + ": must be > 0");
  if (!(v_s > 0) || !std::isfinite(static_cast<double>(v_s))) out.push_back(field("v_s") + ": must be > 0");
  if (w_cycles != f_s * t_s) out.push_back(field("w_cycles") + ": must equal f_s * t_s");
  if (out.empty() && chip.valid() && v_s >= chip.v_th) {
    if (f_s > Scalar(1.01) * max_frequency(v_s, chip))
      out.push_back(field("f_s") + ": not reachable at v_s (more than 1% above the maximum frequency)");
  } else if (out.empty() && chip.valid()) {
    out.push_back(field("v_s") + ": below the threshold voltage");
  }
  return out;
}

/// Note on how the reference k2 constant is stored; printed by
/// `lowvolt --explain-params`.
inline std::string explain_reference_params() {
  const auto chip = ChipParams<double>::reference();
  const auto ref = ReferencePoint<double>::reference();
  std::ostringstream os;
  os.precision(6);
  os << "Reference chip parameters (SI units):\n"
     << "  dyn_const = " << chip.dyn_const << " W/(V^2 Hz)   lumped k1*a*C\n"
     << "  i_leak    = " << chip.i_leak << " A\n"
     << "  k2        = " << chip.k2 << " Hz*V^(1-h)\n"
     << "  v_th      = " << chip.v_th << " V\n"
     << "  h         = " << chip.h << "\n"
     << "  v_max     = " << chip.v_max << " V   (defaults to v_s)\n"
     << "  v_min     = " << chip.v_min << " V   (defaults to v_th + 0.01 V)\n"
     << "  f_s       = " << ref.f_s << " Hz, v_s = " << ref.v_s << " V, t_s = " << ref.t_s << " s\n\n"
     << "k2 unit note: the published constant is printed as 4.02e-9. With volts\n"
     << "and hertz that gives F(1.2 V) ~ 3.2e-9 Hz, contradicting the published\n"
     << "reference pair F_s = 3.2 GHz at V_s = 1.2 V. k2 is therefore stored as\n"
     << "4.02e9 so that max_frequency(1.2 V) = " << max_frequency(1.2, chip) / 1e9 << " GHz.\n";
  return os.str();
}

}  // namespace lowvolt
