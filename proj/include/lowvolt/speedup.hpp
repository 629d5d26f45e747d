#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lowvolt/error.hpp"

namespace lowvolt {

template <typename Scalar = double>
struct AmdahlSpeedup {
  Scalar parallel_fraction{0};

  friend bool operator==(const AmdahlSpeedup&, const AmdahlSpeedup&) = default;
};

template <typename Scalar = double>
struct SpeedupRow {
  int p;
  Scalar s_p;

  friend bool operator==(const SpeedupRow&, const SpeedupRow&) = default;
};

/// Measured speedups, interpolated linearly in p between rows.
template <typename Scalar = double>
struct TableSpeedup {
  std::vector<SpeedupRow<Scalar>> rows;

  friend bool operator==(const TableSpeedup&, const TableSpeedup&) = default;
};

template <typename Scalar = double>
using SpeedupModel = std::variant<AmdahlSpeedup<Scalar>, TableSpeedup<Scalar>>;

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
};

template <typename Scalar>
ValidationReport validate_model(const SpeedupModel<Scalar>& model) {
  ValidationReport report;
  if (const auto* a = std::get_if<AmdahlSpeedup<Scalar>>(&model)) {
    const Scalar f = a->parallel_fraction;
    if (!(f >= 0 && f <= 1)) report.violations.push_back("parallel fraction outside [0, 1]");
    return report;
  }

  const auto& rows = std::get<TableSpeedup<Scalar>>(model).rows;
  if (rows.empty()) {
    report.violations.push_back("table is empty");
    return report;
  }
  bool sorted = true;
  bool unique = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].p < rows[i - 1].p) sorted = false;
    if (rows[i].p == rows[i - 1].p) unique = false;
  }
  if (!sorted) report.violations.push_back("rows not sorted by p");
  if (!unique) report.violations.push_back("duplicate p rows");
  for (const auto& r : rows) {
    if (r.p < 1) report.violations.push_back("row p=" + std::to_string(r.p) + ": p must be >= 1");
    if (!(r.s_p >= 1) || !std::isfinite(static_cast<double>(r.s_p)))
      report.violations.push_back("row p=" + std::to_string(r.p) + ": s_p must be >= 1");
  }
  const auto one = std::find_if(rows.begin(), rows.end(), [](const auto& r) { return r.p == 1; });
  if (one == rows.end())
    report.violations.push_back("table has no p=1 row");
  else if (one->s_p != Scalar(1))
    report.violations.push_back("s_1 must equal 1");

  if (sorted) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].s_p < rows[i - 1].s_p) {
        report.warnings.push_back("speedup decreases between p=" + std::to_string(rows[i - 1].p) +
                                  " and p=" + std::to_string(rows[i].p) +
                                  "; voltage is no longer guaranteed non-increasing in p");
        break;
      }
    }
  }
  return report;
}

/// Largest core count the model answers for (no table extrapolation).
template <typename Scalar>
int max_core_count(const SpeedupModel<Scalar>& model) {
  if (const auto* t = std::get_if<TableSpeedup<Scalar>>(&model))
    return t->rows.empty() ? 0 : t->rows.back().p;
  return std::numeric_limits<int>::max();
}

template <typename Scalar>
Scalar speedup_at(const SpeedupModel<Scalar>& model, int p) {
  if (p < 1) throw Error(ErrorKind::Domain, "speedup_at: core count must be >= 1");

  if (const auto* a = std::get_if<AmdahlSpeedup<Scalar>>(&model)) {
    // p / ((1-f) p + f) is 1/((1-f) + f/p) rearranged; exact at f = 0 and f = 1.
    const Scalar f = a->parallel_fraction;
    return Scalar(p) / ((Scalar(1) - f) * Scalar(p) + f);
  }

  const auto& rows = std::get<TableSpeedup<Scalar>>(model).rows;
  if (rows.empty() || p < rows.front().p || p > rows.back().p) {
    std::ostringstream msg;
    msg << "speedup_at: p=" << p << " outside the measured table range";
    throw Error(ErrorKind::OutOfRange, msg.str());
  }
  const auto hi = std::lower_bound(rows.begin(), rows.end(), p,
                                   [](const SpeedupRow<Scalar>& r, int q) { return r.p < q; });
  if (hi->p == p) return hi->s_p;
  const auto lo = std::prev(hi);
  const Scalar t = Scalar(p - lo->p) / Scalar(hi->p - lo->p);
  return lo->s_p + t * (hi->s_p - lo->s_p);
}

/// Speedups for p = first..last as a column array.
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> speedup_curve(const SpeedupModel<Scalar>& model, int first,
                                                      int last) {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  if (first < 1 || last < first) throw Error(ErrorKind::EmptyRange, "speedup_curve: empty core-count range");
  const Eigen::Index n = last - first + 1;

  if (const auto* a = std::get_if<AmdahlSpeedup<Scalar>>(&model)) {
    const Scalar f = a->parallel_fraction;
    const Array p = Array::LinSpaced(n, Scalar(first), Scalar(last));
    return p / ((Scalar(1) - f) * p + f);
  }
  Array out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = speedup_at(model, first + static_cast<int>(i));
  return out;
}

template <typename Scalar>
std::string describe(const SpeedupModel<Scalar>& model) {
  std::ostringstream os;
  if (const auto* a = std::get_if<AmdahlSpeedup<Scalar>>(&model)) {
    os << "amdahl f=" << static_cast<double>(a->parallel_fraction);
  } else {
    const auto& rows = std::get<TableSpeedup<Scalar>>(model).rows;
    os << "table " << rows.size() << " rows";
    if (!rows.empty()) os << " p=" << rows.front().p << ".." << rows.back().p;
  }
  return os.str();
}

}  // namespace lowvolt
