#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lowvolt/model.hpp"
#include "lowvolt/speedup.hpp"

namespace lowvolt {

struct CoreRange {
  int first{1};
  int last{64};

  friend bool operator==(const CoreRange&, const CoreRange&) = default;
};

/// One energy/voltage curve over core counts for a fixed target.
template <typename Scalar = double>
struct OperatingPlan {
  TargetSpec<Scalar> target;
  std::string model_summary;
  std::vector<PlanRow<Scalar>> rows;
  std::optional<int> optimal_p;

  bool any_feasible() const {
    return std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.feasible(); });
  }
};

/// Minimum-energy feasible row; ties go to the smaller core count.
template <typename Scalar>
std::optional<PlanRow<Scalar>> optimal_point(const OperatingPlan<Scalar>& plan) {
  const PlanRow<Scalar>* best = nullptr;
  for (const auto& row : plan.rows) {
    if (!row.feasible()) continue;
    if (best == nullptr || row.e_j < best->e_j || (row.e_j == best->e_j && row.p < best->p))
      best = &row;
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

/// Evaluate every core count in `range` (clipped to the model's table range).
template <typename Scalar>
OperatingPlan<Scalar> sweep(const ChipParams<Scalar>& chip, const ReferencePoint<Scalar>& ref,
                            const SpeedupModel<Scalar>& model, const TargetSpec<Scalar>& target,
                            CoreRange range) {
  if (!(target.t_r > 0)) throw Error(ErrorKind::Domain, "sweep: t_r must be > 0");
  const int first = std::max(range.first, 1);
  const int last = std::min(range.last, max_core_count(model));
  if (range.first < 1 || last < first)
    throw Error(ErrorKind::EmptyRange, "sweep: empty core-count range");

  const auto speedups = speedup_curve(model, first, last);

  OperatingPlan<Scalar> plan;
  plan.target = target;
  plan.model_summary = describe(model);
  plan.rows.reserve(static_cast<std::size_t>(speedups.size()));
  for (Eigen::Index i = 0; i < speedups.size(); ++i)
    plan.rows.push_back(plan_row(first + static_cast<int>(i), speedups(i), target, ref, chip));

  if (auto best = optimal_point(plan)) plan.optimal_p = best->p;
  return plan;
}

template <typename Scalar = double>
struct FrontierEntry {
  TargetSpec<Scalar> target;
  std::optional<OperatingPlan<Scalar>> plan;
  std::optional<Error> error;
};

/// One sweep per target, in input order. A failing target records its
/// error and the batch continues.
template <typename Scalar>
std::vector<FrontierEntry<Scalar>> frontier(const ChipParams<Scalar>& chip,
                                            const ReferencePoint<Scalar>& ref,
                                            const SpeedupModel<Scalar>& model,
                                            const std::vector<TargetSpec<Scalar>>& targets,
                                            CoreRange range) {
  if (targets.empty()) throw Error(ErrorKind::EmptyRange, "frontier: no targets");
  std::vector<FrontierEntry<Scalar>> out;
  out.reserve(targets.size());
  for (const auto& t : targets) {
    FrontierEntry<Scalar> entry{t, std::nullopt, std::nullopt};
    try {
      entry.plan = sweep(chip, ref, model, t, range);
    } catch (const Error& e) {
      entry.error = e;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace lowvolt
