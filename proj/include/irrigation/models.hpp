#pragma once

#include <cstddef>
#include <span>

#include "irrigation/evaluation.hpp"
#include "irrigation/lp.hpp"
#include "irrigation/scenario.hpp"

namespace irrigation {

struct VarRange {
  std::size_t begin = 0;
  std::size_t count = 0;

  std::size_t operator[](std::size_t i) const { return begin + i; }
  std::size_t end() const { return begin + count; }
};

/// Where each role lives in an LP built from a scenario:
///   area      X_c   hectares per crop
///   env_flow  E_m   environmental flow per month
///   surface   U_m   surface water consumed per month
///   pumping   P_m   groundwater pumped per month
///   shortfall D_m   linearized max(target - E_m, 0); empty when unused
struct ModelVariables {
  VarRange area;
  VarRange env_flow;
  VarRange surface;
  VarRange pumping;
  VarRange shortfall;
  std::size_t total = 0;

  AllocationPlan extract_plan(std::span<const double> values) const;
};

struct BuiltModel {
  LinearProgram lp;
  ModelVariables vars;
};

/// A member of W = {w : w1, w2 > 0, w1 + w2 = 1}.
class WeightPair {
 public:
  /// Throws std::invalid_argument unless 0 < w1 < 1.
  static WeightPair from_w1(double w1);

  double w1() const { return w1_; }
  double w2() const { return w2_; }

  bool operator==(const WeightPair&) const = default;

 private:
  WeightPair(double w1, double w2) : w1_(w1), w2_(w2) {}
  double w1_;
  double w2_;
};

/// Maps raw objectives to nonnegative, unit-free ones anchored at the ideal
/// point:
///   g1 = (nb_ideal - NB) / nb_scale
///   g2 = (EFD - efd_ideal) / efd_scale
struct ObjectiveShift {
  double nb_ideal = 0.0;
  double efd_ideal = 0.0;
  double nb_scale = 1.0;
  double efd_scale = 1.0;

  /// nb_scale = |nb_ideal|, efd_scale = total monthly target (1 when zero).
  static ObjectiveShift from_ideal(const Scenario& scenario, double nb_ideal, double efd_ideal);

  double g1(double net_benefit) const { return (nb_ideal - net_benefit) / nb_scale; }
  double g2(double efd) const { return (efd - efd_ideal) / efd_scale; }
};

enum class Subproblem { first = 1, second = 2 };

/// Maximize net benefit over the shared constraint set; optionally require
/// env_flow_m >= target_m.
BuiltModel build_model1(const Scenario& scenario, bool with_target_constraint);

/// Minimize the sum of shortfalls D_m >= target_m - E_m.
BuiltModel build_model2(const Scenario& scenario);

/// Weighted-constraint subproblems:
///   first:  min w1*g1  s.t. w2*g2 <= w1*g1
///   second: min w2*g2  s.t. w1*g1 <= w2*g2
BuiltModel build_subproblem(const Scenario& scenario, WeightPair weight, Subproblem which,
                            const ObjectiveShift& shift);

/// Minimize EFD among plans with net benefit >= min_net_benefit.
BuiltModel build_min_efd_given_benefit(const Scenario& scenario, double min_net_benefit);

/// Maximize net benefit among plans with EFD <= max_efd.
BuiltModel build_max_benefit_given_efd(const Scenario& scenario, double max_efd);

}  // namespace irrigation
