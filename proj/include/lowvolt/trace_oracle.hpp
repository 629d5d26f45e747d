#pragma once

// Two-phase execution simulator used as an independent check on the
// closed-form energy. Time is accounted from cycle counts; it never calls
// the planner or the speedup models.

#include <string_view>

#include "lowvolt/error.hpp"
#include "lowvolt/model.hpp"

namespace lowvolt {

template <typename Scalar = double>
struct Workload {
  Scalar total_cycles{1};
  Scalar parallel_fraction{0};
};

enum class Accounting {
  AllCoresOn,        // every core powered for the whole run
  SerialPhaseGated,  // p-1 cores gated off during the serial phase
};

inline std::string_view to_string(Accounting a) noexcept {
  return a == Accounting::AllCoresOn ? "all-cores-on" : "serial-phase-gated";
}

template <typename Scalar = double>
struct SimResult {
  Scalar t_serial_phase{0};
  Scalar t_parallel_phase{0};
  Scalar t_total{0};
  Scalar energy_j{0};
  Accounting accounting{Accounting::AllCoresOn};
};

template <typename Scalar>
SimResult<Scalar> simulate(const Workload<Scalar>& w, int p, Scalar f_p, Scalar v_p,
                           const ChipParams<Scalar>& chip, Accounting mode) {
  if (p < 1) throw Error(ErrorKind::Domain, "simulate: core count must be >= 1");
  if (!(f_p > 0)) throw Error(ErrorKind::Domain, "simulate: frequency must be > 0");
  if (!(v_p >= chip.v_th)) throw Error(ErrorKind::Domain, "simulate: voltage below threshold");
  if (!(w.total_cycles > 0)) throw Error(ErrorKind::Domain, "simulate: workload must have cycles");
  const Scalar f = w.parallel_fraction;
  if (!(f >= 0 && f <= 1)) throw Error(ErrorKind::Domain, "simulate: parallel fraction outside [0, 1]");

  const Scalar serial_cycles = (Scalar(1) - f) * w.total_cycles;
  const Scalar parallel_cycles_per_core = f * w.total_cycles / Scalar(p);

  SimResult<Scalar> r;
  r.accounting = mode;
  r.t_serial_phase = serial_cycles / f_p;
  r.t_parallel_phase = parallel_cycles_per_core / f_p;
  r.t_total = r.t_serial_phase + r.t_parallel_phase;

  const Scalar watts = core_power(v_p, f_p, chip).total_w;
  if (mode == Accounting::AllCoresOn)
    r.energy_j = Scalar(p) * watts * r.t_total;
  else
    r.energy_j = watts * r.t_serial_phase + Scalar(p) * watts * r.t_parallel_phase;
  return r;
}

/// Ratio of one-core to p-core simulated run time at a common clock.
template <typename Scalar>
Scalar measured_speedup(const Workload<Scalar>& w, int p) {
  if (p < 1) throw Error(ErrorKind::Domain, "measured_speedup: core count must be >= 1");
  const Scalar f = w.parallel_fraction;
  // Time in cycles at a 1 Hz clock; the clock cancels in the ratio.
  const Scalar serial = (Scalar(1) - f) * w.total_cycles;
  const Scalar t1 = serial + f * w.total_cycles;
  const Scalar tp = serial + f * w.total_cycles / Scalar(p);
  return t1 / tp;
}

}  // namespace lowvolt
