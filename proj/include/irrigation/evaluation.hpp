#pragma once

#include <stdexcept>
#include <vector>

#include "irrigation/scenario.hpp"

namespace irrigation {

/// Decision vector: hectares per crop and environmental flow (GL) per month.
struct AllocationPlan {
  std::vector<double> area_per_crop;
  std::vector<double> env_flow_per_month;

  bool operator==(const AllocationPlan&) const = default;
};

/// Monthly water balance implied by a plan.
///
///   allocation = inflow - env_flow
///   pumping    = max(demand - allocation, 0)
///   surface    = min(max(demand, 0), allocation)
///
/// so surface + pumping equals the (nonnegative part of the) aggregate demand
/// and surface never exceeds the allocation.
struct WaterBalance {
  std::vector<double> demand_per_month;
  std::vector<double> allocation_per_month;
  std::vector<double> surface_used_per_month;
  std::vector<double> pumping_per_month;

  double total_pumping() const;
  double total_surface_used() const;
};

/// (net benefit, environmental flow deficiency). Net benefit is maximized,
/// EFD minimized.
struct ObjectivePair {
  double net_benefit = 0.0;
  double efd = 0.0;

  bool operator==(const ObjectivePair&) const = default;
};

class EvaluationError : public std::runtime_error {
 public:
  enum class Kind { dimension_mismatch, negative_entry, infeasible_allocation };

  EvaluationError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Throws EvaluationError on dimension mismatch, negative entries or an
/// environmental flow exceeding the month's inflow.
WaterBalance derive_water_balance(const Scenario& scenario, const AllocationPlan& plan);

double net_benefit(const Scenario& scenario, const AllocationPlan& plan);
double net_benefit(const Scenario& scenario, const AllocationPlan& plan, const WaterBalance& balance);

/// Sum over months of max(target - env_flow, 0).
double efd(const Scenario& scenario, const AllocationPlan& plan);

ObjectivePair evaluate(const Scenario& scenario, const AllocationPlan& plan);

/// Normalized total excess over the shared constraint set: pumping cap, total
/// area, per-crop area box, env-flow box and env flow <= inflow. Zero iff the
/// plan is feasible. Does not throw on env flow > inflow; the balance is
/// evaluated with allocation clamped at zero in that case.
double constraint_violation(const Scenario& scenario, const AllocationPlan& plan);

/// A point weakly dominated by every feasible plan's objectives, used as the
/// hypervolume reference for a scenario.
ObjectivePair objective_floor(const Scenario& scenario);

}  // namespace irrigation
