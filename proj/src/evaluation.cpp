#include "irrigation/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace irrigation {

double WaterBalance::total_pumping() const {
  return std::accumulate(pumping_per_month.begin(), pumping_per_month.end(), 0.0);
}

double WaterBalance::total_surface_used() const {
  return std::accumulate(surface_used_per_month.begin(), surface_used_per_month.end(), 0.0);
}

namespace {

void check_dimensions(const Scenario& scenario, const AllocationPlan& plan) {
  if (plan.area_per_crop.size() != scenario.crop_count()) {
    throw EvaluationError(EvaluationError::Kind::dimension_mismatch,
                          "plan has " + std::to_string(plan.area_per_crop.size()) + " crop areas, scenario has " +
                              std::to_string(scenario.crop_count()) + " crops");
  }
  if (plan.env_flow_per_month.size() != scenario.month_count()) {
    throw EvaluationError(EvaluationError::Kind::dimension_mismatch,
                          "plan has " + std::to_string(plan.env_flow_per_month.size()) +
                              " monthly flows, scenario has " + std::to_string(scenario.month_count()) + " months");
  }
}

void check_nonnegative(const AllocationPlan& plan) {
  for (std::size_t c = 0; c < plan.area_per_crop.size(); ++c) {
    if (!(plan.area_per_crop[c] >= 0.0)) {
      throw EvaluationError(EvaluationError::Kind::negative_entry,
                            "area_per_crop[" + std::to_string(c) + "] is negative");
    }
  }
  for (std::size_t m = 0; m < plan.env_flow_per_month.size(); ++m) {
    if (!(plan.env_flow_per_month[m] >= 0.0)) {
      throw EvaluationError(EvaluationError::Kind::negative_entry,
                            "env_flow_per_month[" + std::to_string(m) + "] is negative");
    }
  }
}

WaterBalance balance_unchecked(const Scenario& scenario, const AllocationPlan& plan) {
  const std::size_t n_months = scenario.month_count();
  WaterBalance wb;
  wb.demand_per_month.assign(n_months, 0.0);
  wb.allocation_per_month.resize(n_months);
  wb.surface_used_per_month.resize(n_months);
  wb.pumping_per_month.resize(n_months);

  for (std::size_t m = 0; m < n_months; ++m) {
    double demand = 0.0;
    for (std::size_t c = 0; c < scenario.crop_count(); ++c) demand += scenario.demand_per_ha(c, m) * plan.area_per_crop[c];
    const double allocation = scenario.months()[m].inflow - plan.env_flow_per_month[m];
    const double usable = std::max(allocation, 0.0);
    wb.demand_per_month[m] = demand;
    wb.allocation_per_month[m] = allocation;
    wb.surface_used_per_month[m] = std::min(std::max(demand, 0.0), usable);
    wb.pumping_per_month[m] = std::max(demand - usable, 0.0);
  }
  return wb;
}

}  // namespace

WaterBalance derive_water_balance(const Scenario& scenario, const AllocationPlan& plan) {
  check_dimensions(scenario, plan);
  check_nonnegative(plan);
  for (std::size_t m = 0; m < scenario.month_count(); ++m) {
    if (plan.env_flow_per_month[m] > scenario.months()[m].inflow) {
      throw EvaluationError(EvaluationError::Kind::infeasible_allocation,
                            "env_flow_per_month[" + std::to_string(m) + "] exceeds the month's inflow");
    }
  }
  return balance_unchecked(scenario, plan);
}

double net_benefit(const Scenario& scenario, const AllocationPlan& plan, const WaterBalance& balance) {
  const auto& lim = scenario.limits();
  double revenue = 0.0;
  double variable_cost = 0.0;
  for (std::size_t c = 0; c < scenario.crop_count(); ++c) {
    revenue += scenario.crops()[c].gross_revenue_per_ha * plan.area_per_crop[c];
    variable_cost += scenario.crops()[c].variable_cost_per_ha * plan.area_per_crop[c];
  }
  return revenue - lim.surface_cost_per_gl * balance.total_surface_used() -
         lim.pump_cost_per_gl * balance.total_pumping() - variable_cost;
}

double net_benefit(const Scenario& scenario, const AllocationPlan& plan) {
  return net_benefit(scenario, plan, derive_water_balance(scenario, plan));
}

double efd(const Scenario& scenario, const AllocationPlan& plan) {
  check_dimensions(scenario, plan);
  double total = 0.0;
  for (std::size_t m = 0; m < scenario.month_count(); ++m) {
    total += std::max(scenario.months()[m].target_env_flow - plan.env_flow_per_month[m], 0.0);
  }
  return total;
}

ObjectivePair evaluate(const Scenario& scenario, const AllocationPlan& plan) {
  const WaterBalance wb = derive_water_balance(scenario, plan);
  return {net_benefit(scenario, plan, wb), efd(scenario, plan)};
}

double constraint_violation(const Scenario& scenario, const AllocationPlan& plan) {
  check_dimensions(scenario, plan);
  const auto& lim = scenario.limits();
  auto excess = [](double value, double cap) { return std::max(value - cap, 0.0) / std::max(std::abs(cap), 1.0); };

  double violation = 0.0;
  double area_sum = 0.0;
  for (double area : plan.area_per_crop) {
    area_sum += area;
    violation += excess(lim.area_min_per_crop, area) + excess(area, lim.area_upper_per_crop);
  }
  violation += excess(area_sum, lim.area_total);

  for (std::size_t m = 0; m < scenario.month_count(); ++m) {
    const double flow = plan.env_flow_per_month[m];
    violation += excess(0.0, flow) + excess(flow, lim.env_flow_upper_per_month) +
                 excess(flow, scenario.months()[m].inflow);
  }

  const WaterBalance wb = balance_unchecked(scenario, plan);
  violation += excess(wb.total_pumping(), lim.pump_cap_total);
  return violation;
}

ObjectivePair objective_floor(const Scenario& scenario) {
  const auto& lim = scenario.limits();
  double nb = 0.0;
  for (const auto& crop : scenario.crops()) {
    const double margin = crop.gross_revenue_per_ha - crop.variable_cost_per_ha;
    nb += std::min(margin * lim.area_min_per_crop, margin * lim.area_upper_per_crop);
  }
  double inflow = 0.0;
  for (const auto& month : scenario.months()) inflow += month.inflow;
  nb -= lim.surface_cost_per_gl * inflow + lim.pump_cost_per_gl * lim.pump_cap_total;
  return {nb, scenario.total_target_env_flow()};
}

}  // namespace irrigation
