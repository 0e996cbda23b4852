#include "irrigation/models.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace irrigation {

AllocationPlan ModelVariables::extract_plan(std::span<const double> values) const {
  AllocationPlan plan;
  plan.area_per_crop.assign(values.begin() + static_cast<std::ptrdiff_t>(area.begin),
                            values.begin() + static_cast<std::ptrdiff_t>(area.end()));
  plan.env_flow_per_month.assign(values.begin() + static_cast<std::ptrdiff_t>(env_flow.begin),
                                 values.begin() + static_cast<std::ptrdiff_t>(env_flow.end()));
  return plan;
}

WeightPair WeightPair::from_w1(double w1) {
  if (!(w1 > 0.0 && w1 < 1.0)) throw std::invalid_argument("weights must be strictly positive and sum to 1");
  return WeightPair(w1, 1.0 - w1);
}

ObjectiveShift ObjectiveShift::from_ideal(const Scenario& scenario, double nb_ideal, double efd_ideal) {
  ObjectiveShift shift;
  shift.nb_ideal = nb_ideal;
  shift.efd_ideal = efd_ideal;
  shift.nb_scale = std::abs(nb_ideal) > 0.0 ? std::abs(nb_ideal) : 1.0;
  const double total_target = scenario.total_target_env_flow();
  shift.efd_scale = total_target > 0.0 ? total_target : 1.0;
  return shift;
}

namespace {

using Terms = std::vector<std::pair<std::size_t, double>>;

std::string indexed(const char* role, const std::string& label) { return std::string(role) + "[" + label + "]"; }

BuiltModel shared_model(const Scenario& scenario, bool with_shortfall, bool with_target_constraint) {
  const auto& lim = scenario.limits();
  const std::size_t n_crops = scenario.crop_count();
  const std::size_t n_months = scenario.month_count();

  BuiltModel model;
  auto& lp = model.lp;
  auto& v = model.vars;

  v.area = {lp.variable_count(), n_crops};
  for (std::size_t c = 0; c < n_crops; ++c) {
    lp.add_variable(indexed("X", scenario.crops()[c].name), lim.area_min_per_crop, lim.area_upper_per_crop);
  }
  v.env_flow = {lp.variable_count(), n_months};
  for (std::size_t m = 0; m < n_months; ++m) {
    const double lower = with_target_constraint ? scenario.months()[m].target_env_flow : 0.0;
    // Target above the upper bound makes the model infeasible; report that
    // through the solver rather than an invalid LP.
    const double upper = std::max(lim.env_flow_upper_per_month, with_target_constraint ? lower : 0.0);
    lp.add_variable(indexed("E", std::to_string(m + 1)), lower, upper);
  }
  v.surface = {lp.variable_count(), n_months};
  for (std::size_t m = 0; m < n_months; ++m) lp.add_variable(indexed("U", std::to_string(m + 1)));
  v.pumping = {lp.variable_count(), n_months};
  for (std::size_t m = 0; m < n_months; ++m) lp.add_variable(indexed("P", std::to_string(m + 1)));
  v.shortfall = {lp.variable_count(), with_shortfall ? n_months : 0};
  for (std::size_t m = 0; m < v.shortfall.count; ++m) lp.add_variable(indexed("D", std::to_string(m + 1)));
  v.total = lp.variable_count();

  for (std::size_t m = 0; m < n_months; ++m) {
    const std::string month = std::to_string(m + 1);
    // Demand is met by surface water plus pumping. A rain surplus (negative
    // aggregate demand) leaves U = P = 0.
    Terms demand;
    for (std::size_t c = 0; c < n_crops; ++c) demand.emplace_back(v.area[c], scenario.demand_per_ha(c, m));
    demand.emplace_back(v.surface[m], -1.0);
    demand.emplace_back(v.pumping[m], -1.0);
    lp.add_constraint(demand, Relation::less_equal, 0.0, "demand_" + month);

    lp.add_constraint({{v.surface[m], 1.0}, {v.env_flow[m], 1.0}}, Relation::less_equal,
                      scenario.months()[m].inflow, "allocation_" + month);

    if (with_target_constraint && lim.env_flow_upper_per_month < scenario.months()[m].target_env_flow) {
      lp.add_constraint({{v.env_flow[m], 1.0}}, Relation::less_equal, lim.env_flow_upper_per_month,
                        "env_upper_" + month);
    }
    if (with_shortfall) {
      lp.add_constraint({{v.shortfall[m], 1.0}, {v.env_flow[m], 1.0}}, Relation::greater_equal,
                        scenario.months()[m].target_env_flow, "shortfall_" + month);
    }
  }

  Terms pumping;
  for (std::size_t m = 0; m < n_months; ++m) pumping.emplace_back(v.pumping[m], 1.0);
  lp.add_constraint(pumping, Relation::less_equal, lim.pump_cap_total, "pump_cap");

  Terms area;
  for (std::size_t c = 0; c < n_crops; ++c) area.emplace_back(v.area[c], 1.0);
  lp.add_constraint(area, Relation::less_equal, lim.area_total, "area_total");
  return model;
}

// Linear net benefit: sum (P_c - Vcost_c) X_c - C_w sum U_m - C_p sum P_m.
Terms benefit_terms(const Scenario& scenario, const ModelVariables& v) {
  const auto& lim = scenario.limits();
  Terms terms;
  for (std::size_t c = 0; c < scenario.crop_count(); ++c) {
    const auto& crop = scenario.crops()[c];
    terms.emplace_back(v.area[c], crop.gross_revenue_per_ha - crop.variable_cost_per_ha);
  }
  for (std::size_t m = 0; m < scenario.month_count(); ++m) {
    terms.emplace_back(v.surface[m], -lim.surface_cost_per_gl);
    terms.emplace_back(v.pumping[m], -lim.pump_cost_per_gl);
  }
  return terms;
}

Terms shortfall_terms(const ModelVariables& v) {
  Terms terms;
  for (std::size_t m = 0; m < v.shortfall.count; ++m) terms.emplace_back(v.shortfall[m], 1.0);
  return terms;
}

Terms scaled(Terms terms, double factor) {
  for (auto& [index, value] : terms) value *= factor;
  return terms;
}

void set_objective(LinearProgram& lp, Sense sense, const Terms& terms) {
  lp.set_sense(sense);
  for (const auto& [index, value] : terms) lp.set_cost(index, lp.costs()[index] + value);
}

void append(Terms& into, const Terms& from) { into.insert(into.end(), from.begin(), from.end()); }

}  // namespace

BuiltModel build_model1(const Scenario& scenario, bool with_target_constraint) {
  BuiltModel model = shared_model(scenario, false, with_target_constraint);
  set_objective(model.lp, Sense::maximize, benefit_terms(scenario, model.vars));
  return model;
}

BuiltModel build_model2(const Scenario& scenario) {
  BuiltModel model = shared_model(scenario, true, false);
  set_objective(model.lp, Sense::minimize, shortfall_terms(model.vars));
  return model;
}

BuiltModel build_subproblem(const Scenario& scenario, WeightPair weight, Subproblem which,
                            const ObjectiveShift& shift) {
  BuiltModel model = shared_model(scenario, true, false);
  auto& lp = model.lp;
  const double w1 = weight.w1();
  const double w2 = weight.w2();

  // w1*g1 = a1 - (w1/s1)*NB   with a1 = w1*nb_ideal/s1
  // w2*g2 = (w2/s2)*sum(D) - a2 with a2 = w2*efd_ideal/s2
  const double a1 = w1 * shift.nb_ideal / shift.nb_scale;
  const double a2 = w2 * shift.efd_ideal / shift.efd_scale;
  const Terms weighted_benefit = scaled(benefit_terms(scenario, model.vars), w1 / shift.nb_scale);
  const Terms weighted_shortfall = scaled(shortfall_terms(model.vars), w2 / shift.efd_scale);

  if (which == Subproblem::first) {
    // min a1 - (w1/s1) NB   s.t.  (w2/s2) sum D + (w1/s1) NB <= a1 + a2
    set_objective(lp, Sense::minimize, scaled(weighted_benefit, -1.0));
    lp.set_objective_offset(a1);
    Terms row = weighted_shortfall;
    append(row, weighted_benefit);
    lp.add_constraint(row, Relation::less_equal, a1 + a2, "weighted_first");
  } else {
    // min (w2/s2) sum D - a2   s.t.  (w2/s2) sum D + (w1/s1) NB >= a1 + a2
    set_objective(lp, Sense::minimize, weighted_shortfall);
    lp.set_objective_offset(-a2);
    Terms row = weighted_shortfall;
    append(row, weighted_benefit);
    lp.add_constraint(row, Relation::greater_equal, a1 + a2, "weighted_second");
  }
  return model;
}

BuiltModel build_min_efd_given_benefit(const Scenario& scenario, double min_net_benefit) {
  BuiltModel model = shared_model(scenario, true, false);
  set_objective(model.lp, Sense::minimize, shortfall_terms(model.vars));
  model.lp.add_constraint(benefit_terms(scenario, model.vars), Relation::greater_equal, min_net_benefit,
                          "benefit_floor");
  return model;
}

BuiltModel build_max_benefit_given_efd(const Scenario& scenario, double max_efd) {
  BuiltModel model = shared_model(scenario, true, false);
  set_objective(model.lp, Sense::maximize, benefit_terms(scenario, model.vars));
  model.lp.add_constraint(shortfall_terms(model.vars), Relation::less_equal, max_efd, "efd_ceiling");
  return model;
}

}  // namespace irrigation
