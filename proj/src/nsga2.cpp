#include "irrigation/nsga2.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "irrigation/parallel.hpp"

namespace irrigation {

namespace {

constexpr double kSbxEta = 15.0;
constexpr double kMutationEta = 20.0;

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

void GaConfig::validate() const {
  if (population_size < 4 || population_size % 2 != 0) {
    throw std::invalid_argument("population size must be even and at least 4");
  }
  if (!in_unit(crossover_rate)) throw std::invalid_argument("crossover rate must lie in [0, 1]");
  if (!in_unit(mutation_rate)) throw std::invalid_argument("mutation rate must lie in [0, 1]");
  if (!in_unit(mutation_scale)) throw std::invalid_argument("mutation scale must lie in [0, 1]");
}

Individual make_individual(const Scenario& scenario, AllocationPlan plan) {
  Individual ind;
  ind.constraint_violation = constraint_violation(scenario, plan);
  ind.feasible = ind.constraint_violation == 0.0;
  ind.objectives = evaluate(scenario, plan);
  ind.plan = std::move(plan);
  return ind;
}

bool constrained_dominates(const Individual& a, const Individual& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (!a.feasible) return a.constraint_violation < b.constraint_violation;
  return dominates(a.objectives, b.objectives);
}

std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<Individual>& population) {
  const std::size_t n = population.size();
  std::vector<std::vector<std::size_t>> dominated_by(n);
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts(1);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      if (constrained_dominates(population[p], population[q])) {
        dominated_by[p].push_back(q);
      } else if (constrained_dominates(population[q], population[p])) {
        ++domination_count[p];
      }
    }
    if (domination_count[p] == 0) fronts[0].push_back(p);
  }
  while (!fronts.back().empty()) {
    std::vector<std::size_t> next;
    for (std::size_t p : fronts.back()) {
      for (std::size_t q : dominated_by[p]) {
        if (--domination_count[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

namespace {

struct Genome {
  std::vector<double> lower;
  std::vector<double> upper;
  std::size_t crops = 0;

  std::size_t size() const { return lower.size(); }

  AllocationPlan decode(const std::vector<double>& genes) const {
    AllocationPlan plan;
    plan.area_per_crop.assign(genes.begin(), genes.begin() + static_cast<std::ptrdiff_t>(crops));
    plan.env_flow_per_month.assign(genes.begin() + static_cast<std::ptrdiff_t>(crops), genes.end());
    return plan;
  }

  std::vector<double> encode(const AllocationPlan& plan) const {
    std::vector<double> genes = plan.area_per_crop;
    genes.insert(genes.end(), plan.env_flow_per_month.begin(), plan.env_flow_per_month.end());
    return genes;
  }
};

Genome genome_for(const Scenario& scenario) {
  const auto& lim = scenario.limits();
  Genome g;
  g.crops = scenario.crop_count();
  for (std::size_t c = 0; c < scenario.crop_count(); ++c) {
    g.lower.push_back(lim.area_min_per_crop);
    g.upper.push_back(lim.area_upper_per_crop);
  }
  for (const auto& month : scenario.months()) {
    g.lower.push_back(0.0);
    g.upper.push_back(std::min(lim.env_flow_upper_per_month, month.inflow));
  }
  return g;
}

std::vector<double> crowding_distance(const std::vector<Individual>& pop, const std::vector<std::size_t>& front) {
  const std::size_t n = front.size();
  std::vector<double> distance(n, 0.0);
  if (n <= 2) {
    std::fill(distance.begin(), distance.end(), std::numeric_limits<double>::infinity());
    return distance;
  }
  auto accumulate = [&](auto key) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return key(pop[front[a]]) < key(pop[front[b]]); });
    const double lo = key(pop[front[order.front()]]);
    const double hi = key(pop[front[order.back()]]);
    distance[order.front()] = std::numeric_limits<double>::infinity();
    distance[order.back()] = std::numeric_limits<double>::infinity();
    if (hi <= lo) return;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      distance[order[k]] += (key(pop[front[order[k + 1]]]) - key(pop[front[order[k - 1]]])) / (hi - lo);
    }
  };
  accumulate([](const Individual& i) { return i.objectives.net_benefit; });
  accumulate([](const Individual& i) { return i.objectives.efd; });
  accumulate([](const Individual& i) { return i.constraint_violation; });
  return distance;
}

// Picks `count` members of front by descending crowding distance, stable on
// front order.
std::vector<std::size_t> most_crowded_apart(const std::vector<Individual>& pop, const std::vector<std::size_t>& front,
                                            std::size_t count) {
  const auto distance = crowding_distance(pop, front);
  std::vector<std::size_t> order(front.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return distance[a] > distance[b]; });
  std::vector<std::size_t> picked;
  for (std::size_t k = 0; k < count && k < order.size(); ++k) picked.push_back(front[order[k]]);
  return picked;
}

struct Ranked {
  std::vector<std::size_t> rank;
  std::vector<double> crowding;
  std::vector<std::size_t> first_front;
};

Ranked rank_population(const std::vector<Individual>& pop) {
  Ranked r;
  r.rank.assign(pop.size(), 0);
  r.crowding.assign(pop.size(), 0.0);
  const auto fronts = nondominated_sort(pop);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    const auto distance = crowding_distance(pop, fronts[f]);
    for (std::size_t k = 0; k < fronts[f].size(); ++k) {
      r.rank[fronts[f][k]] = f;
      r.crowding[fronts[f][k]] = distance[k];
    }
  }
  if (!fronts.empty()) r.first_front = fronts[0];
  return r;
}

double front_area(const std::vector<Individual>& pop, const std::vector<std::size_t>& front,
                  const ObjectivePair& reference) {
  std::vector<ObjectivePair> points;
  for (std::size_t i : front) {
    if (pop[i].feasible) points.push_back(pop[i].objectives);
  }
  return dominated_area(points, reference);
}

class Operators {
 public:
  Operators(const Genome& genome, const GaConfig& config, std::mt19937_64& rng)
      : genome_(genome), config_(config), rng_(rng) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  void crossover(std::vector<double>& a, std::vector<double>& b) {
    if (uniform() >= config_.crossover_rate) return;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (uniform() >= 0.5 || std::abs(a[j] - b[j]) < 1e-14) continue;
      const double u = uniform();
      const double beta = u <= 0.5 ? std::pow(2.0 * u, 1.0 / (kSbxEta + 1.0))
                                   : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (kSbxEta + 1.0));
      const double c1 = 0.5 * ((1.0 + beta) * a[j] + (1.0 - beta) * b[j]);
      const double c2 = 0.5 * ((1.0 - beta) * a[j] + (1.0 + beta) * b[j]);
      a[j] = clamp(j, c1);
      b[j] = clamp(j, c2);
    }
  }

  void mutate(std::vector<double>& x) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (uniform() >= config_.mutation_rate) continue;
      const double u = uniform();
      const double delta = u < 0.5 ? std::pow(2.0 * u, 1.0 / (kMutationEta + 1.0)) - 1.0
                                   : 1.0 - std::pow(2.0 * (1.0 - u), 1.0 / (kMutationEta + 1.0));
      x[j] = clamp(j, x[j] + delta * config_.mutation_scale * (genome_.upper[j] - genome_.lower[j]));
    }
  }

  std::vector<double> random_genes() {
    std::vector<double> x(genome_.size());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = genome_.lower[j] + uniform() * (genome_.upper[j] - genome_.lower[j]);
    return x;
  }

 private:
  double clamp(std::size_t j, double v) const { return std::clamp(v, genome_.lower[j], genome_.upper[j]); }

  const Genome& genome_;
  const GaConfig& config_;
  std::mt19937_64& rng_;
};

std::vector<Individual> evaluate_all(const Scenario& scenario, const Genome& genome,
                                     const std::vector<std::vector<double>>& genes, std::size_t threads) {
  std::vector<Individual> out(genes.size());
  parallel_for(genes.size(), threads,
               [&](std::size_t i) { out[i] = make_individual(scenario, genome.decode(genes[i])); });
  return out;
}

// Survivors from parents ++ offspring. When the first front alone overflows,
// every previous first-front feasible parent is carried over or replaced by a
// member dominating it, so the first front never loses ground.
std::vector<std::size_t> select_survivors(const std::vector<Individual>& combined, std::size_t target,
                                          const std::vector<std::size_t>& previous_first) {
  const auto fronts = nondominated_sort(combined);
  std::vector<std::size_t> next;
  if (fronts[0].size() > target) {
    const auto& f1 = fronts[0];
    std::vector<char> chosen(combined.size(), 0);
    for (std::size_t p : previous_first) {
      if (!combined[p].feasible) continue;
      std::size_t keep = p;
      if (std::find(f1.begin(), f1.end(), p) == f1.end()) {
        keep = *std::find_if(f1.begin(), f1.end(),
                             [&](std::size_t q) { return constrained_dominates(combined[q], combined[p]); });
      }
      if (!chosen[keep]) {
        chosen[keep] = 1;
        next.push_back(keep);
      }
    }
    std::vector<std::size_t> rest;
    for (std::size_t q : f1) {
      if (!chosen[q]) rest.push_back(q);
    }
    for (std::size_t q : most_crowded_apart(combined, rest, target - next.size())) next.push_back(q);
    return next;
  }
  for (const auto& front : fronts) {
    if (next.size() + front.size() <= target) {
      next.insert(next.end(), front.begin(), front.end());
    } else {
      for (std::size_t q : most_crowded_apart(combined, front, target - next.size())) next.push_back(q);
    }
    if (next.size() == target) break;
  }
  return next;
}

}  // namespace

GaResult run_ga(const Scenario& scenario, const GaConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const Genome genome = genome_for(scenario);
  const ObjectivePair reference = objective_floor(scenario);
  std::mt19937_64 rng(config.seed);
  Operators ops(genome, config, rng);
  const std::size_t n = config.population_size;

  std::vector<std::vector<double>> genes(n);
  for (auto& g : genes) g = ops.random_genes();
  std::vector<Individual> population = evaluate_all(scenario, genome, genes, config.threads);
  std::size_t evaluations = n;

  GaResult result;
  Ranked ranked = rank_population(population);
  result.hypervolume_history.push_back(front_area(population, ranked.first_front, reference));

  auto tournament = [&]() {
    const std::size_t a = ops.pick(n);
    const std::size_t b = ops.pick(n);
    if (ranked.rank[a] != ranked.rank[b]) return ranked.rank[a] < ranked.rank[b] ? a : b;
    return ranked.crowding[b] > ranked.crowding[a] ? b : a;
  };

  for (std::size_t gen = 0; gen < config.generations; ++gen) {
    std::vector<std::vector<double>> children;
    children.reserve(n);
    while (children.size() < n) {
      auto a = genome.encode(population[tournament()].plan);
      auto b = genome.encode(population[tournament()].plan);
      ops.crossover(a, b);
      ops.mutate(a);
      ops.mutate(b);
      children.push_back(std::move(a));
      children.push_back(std::move(b));
    }
    std::vector<Individual> combined = population;
    auto offspring = evaluate_all(scenario, genome, children, config.threads);
    evaluations += offspring.size();
    combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
                    std::make_move_iterator(offspring.end()));

    const auto survivors = select_survivors(combined, n, ranked.first_front);
    std::vector<Individual> next;
    next.reserve(n);
    for (std::size_t i : survivors) next.push_back(combined[i]);
    population = std::move(next);
    ranked = rank_population(population);
    result.hypervolume_history.push_back(front_area(population, ranked.first_front, reference));
  }

  std::vector<ParetoPoint> feasible;
  for (const auto& ind : population) {
    if (!ind.feasible) continue;
    ParetoPoint p;
    p.objectives = ind.objectives;
    p.plan = ind.plan;
    p.source = PointSource::evolutionary;
    feasible.push_back(std::move(p));
  }
  if (feasible.empty()) {
    throw GaError("no feasible individual after " + std::to_string(config.generations) + " generations");
  }
  result.front.points = filter_nondominated(feasible);
  result.front.stats.grid_points = n;
  result.front.stats.subproblems_solved = evaluations;
  result.front.stats.discarded_count = feasible.size() - result.front.points.size();
  result.front.stats.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace irrigation
