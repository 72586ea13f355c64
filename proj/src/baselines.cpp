#include "graphgen/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <vector>

namespace graphgen {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_ms(clock_type::time_point start) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
}

// Cells between real nodes; with init_random's trailing padding this is the
// lower triangle of the leading size x size block.
std::vector<CellIndex> searchable_cells(const GraphState& state) {
  std::vector<CellIndex> cells;
  for (int row = 1; row < state.n(); ++row) {
    for (int col = 0; col < row; ++col) {
      if (!state.node_is_empty(row) && !state.node_is_empty(col)) {
        cells.push_back(CellIndex{row, col});
      }
    }
  }
  return cells;
}

// Incident lower-triangle cells of one node.
std::vector<CellIndex> incident_cells(const GraphState& state, int node) {
  std::vector<CellIndex> cells;
  for (int other = 0; other < state.n(); ++other) {
    if (other == node) continue;
    cells.push_back(CellIndex{std::max(node, other), std::min(node, other)});
  }
  return cells;
}

}  // namespace

std::pair<GraphState, SearchStats> random_search(const ConstraintSet& cs,
                                                 const GraphConfig& config, int max_size,
                                                 std::uint64_t seed, std::int64_t budget) {
  if (budget <= 0) throw ConfigError("random search needs a positive budget");
  check_config_feasible(cs, config, max_size);
  Rng rng(seed);
  const auto start = clock_type::now();

  GraphState state = init_random(config, max_size, 0.5, cs.alphabet(), rng);
  const auto cells = searchable_cells(state);

  SearchStats stats;
  GraphState best = state;
  int best_violations = total_violations(cs, state).total;
  ++stats.evaluations;

  while (best_violations > 0 && stats.evaluations < budget && !cells.empty()) {
    const auto& cell =
        cells[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(cells.size()) - 1))];
    state.set_edge(cell, !state.edge(cell));
    const int violations = total_violations(cs, state).total;
    ++stats.evaluations;
    if (violations < best_violations) {
      best_violations = violations;
      best = state;
    }
  }

  stats.success = best_violations == 0;
  stats.final_violations = best_violations;
  stats.duration_ms = elapsed_ms(start);
  return {best, stats};
}

GraphState ea_crossover(const GraphState& parent_a, const GraphState& parent_b, Rng& rng) {
  if (parent_a.diagonal() != parent_b.diagonal()) {
    throw ContractError("crossover parents must share a diagonal");
  }
  GraphState child = parent_a;
  const int node = static_cast<int>(rng.uniform_int(0, parent_a.n() - 1));
  for (const auto& cell : incident_cells(parent_a, node)) {
    child.set_edge(cell, parent_b.edge(cell));
  }
  return child;
}

GraphState ea_crossover(const GraphState& parent_a, const GraphState& parent_b,
                        std::uint64_t seed) {
  Rng rng(seed);
  return ea_crossover(parent_a, parent_b, rng);
}

GraphState ea_mutate(const GraphState& individual, double rate, Rng& rng) {
  if (rate < 0.0 || rate > 1.0) throw ContractError("mutation rate must be in [0, 1]");
  if (!rng.bernoulli(rate)) return individual;

  std::vector<int> real_nodes;
  for (int node = 0; node < individual.n(); ++node) {
    if (!individual.node_is_empty(node)) real_nodes.push_back(node);
  }
  if (real_nodes.empty()) return individual;

  GraphState mutated = individual;
  const int node = real_nodes[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(real_nodes.size()) - 1))];
  for (const auto& cell : incident_cells(individual, node)) {
    mutated.set_edge(cell, rng.bernoulli(0.5));
  }
  return mutated;
}

GraphState ea_mutate(const GraphState& individual, double rate, std::uint64_t seed) {
  Rng rng(seed);
  return ea_mutate(individual, rate, rng);
}

std::pair<GraphState, SearchStats> ea_generate(const ConstraintSet& cs,
                                               const GraphConfig& config, int max_size,
                                               const EAParams& params) {
  if (params.population < 2) throw ConfigError("population must be at least 2");
  check_config_feasible(cs, config, max_size);
  Rng rng(params.seed);
  const auto start = clock_type::now();

  SearchStats stats;
  const auto finish = [&](const GraphState& state, int violations, int generation) {
    stats.success = violations == 0;
    stats.final_violations = violations;
    stats.generations = generation;
    stats.duration_ms = elapsed_ms(start);
    return std::make_pair(state, stats);
  };

  // The whole population shares one shuffled diagonal; individuals differ
  // only in their edge noise.
  GraphState seed_state(make_diagonal(config, max_size, cs.alphabet().empty_code()),
                        cs.alphabet().empty_code());

  std::vector<GraphState> population;
  std::vector<int> fitness;
  population.reserve(static_cast<std::size_t>(params.population));
  fitness.reserve(static_cast<std::size_t>(params.population));
  for (int i = 0; i < params.population; ++i) {
    GraphState individual = seed_state;
    randomize_edges(individual, 0.5, rng);
    const int violations = total_violations(cs, individual).total;
    ++stats.evaluations;
    if (violations == 0) return finish(individual, 0, 0);
    population.push_back(std::move(individual));
    fitness.push_back(violations);
  }

  const auto tournament = [&]() -> int {
    int best = static_cast<int>(rng.uniform_int(0, params.population - 1));
    for (int k = 1; k < params.tournament; ++k) {
      const int contender = static_cast<int>(rng.uniform_int(0, params.population - 1));
      if (fitness[static_cast<std::size_t>(contender)] < fitness[static_cast<std::size_t>(best)]) {
        best = contender;
      }
    }
    return best;
  };

  std::vector<GraphState> next_population;
  std::vector<int> next_fitness;
  next_population.reserve(static_cast<std::size_t>(params.population));
  next_fitness.reserve(static_cast<std::size_t>(params.population));

  for (int generation = 1; generation <= params.max_generations; ++generation) {
    next_population.clear();
    next_fitness.clear();

    const auto elite = static_cast<std::size_t>(
        std::min_element(fitness.begin(), fitness.end()) - fitness.begin());
    next_population.push_back(population[elite]);
    next_fitness.push_back(fitness[elite]);

    while (static_cast<int>(next_population.size()) < params.population) {
      const auto& parent_a = population[static_cast<std::size_t>(tournament())];
      const auto& parent_b = population[static_cast<std::size_t>(tournament())];
      GraphState child = ea_crossover(parent_a, parent_b, rng);
      child = ea_mutate(child, params.mutation_rate, rng);
      const int violations = total_violations(cs, child).total;
      ++stats.evaluations;
      if (violations == 0) return finish(child, 0, generation);
      next_population.push_back(std::move(child));
      next_fitness.push_back(violations);
    }
    population.swap(next_population);
    fitness.swap(next_fitness);
  }

  const auto best =
      static_cast<std::size_t>(std::min_element(fitness.begin(), fitness.end()) - fitness.begin());
  return finish(population[best], fitness[best], params.max_generations);
}

}  // namespace graphgen
