#pragma once

#include <cstdint>

#include "graphgen/constraints.hpp"
#include "graphgen/graph.hpp"

namespace graphgen {

/// Evolutionary-search knobs. The mutation rate is per individual.
struct EAParams {
  int population = 50;
  int tournament = 3;
  double mutation_rate = 0.05;
  int max_generations = 10000;
  std::uint64_t seed = 0;
};

/// Outcome of one search run. success implies the returned graph re-validates
/// with zero violations.
struct SearchStats {
  std::int64_t evaluations = 0;
  double duration_ms = 0.0;
  bool success = false;
  int final_violations = 0;
  int generations = 0;  // evolutionary runs only
};

/// Blind search: start from noise, toggle one uniformly random cell between
/// real nodes, check validity, repeat. No learning between steps. Returns the
/// best state seen when the evaluation budget runs out.
std::pair<GraphState, SearchStats> random_search(const ConstraintSet& cs,
                                                 const GraphConfig& config, int max_size,
                                                 std::uint64_t seed,
                                                 std::int64_t budget = 100'000'000);

/// Node-connection crossover: the child is parent_a with one uniformly chosen
/// node's incident edges overwritten from parent_b. Diagonals must match.
GraphState ea_crossover(const GraphState& parent_a, const GraphState& parent_b, Rng& rng);
GraphState ea_crossover(const GraphState& parent_a, const GraphState& parent_b,
                        std::uint64_t seed);

/// With probability `rate`, re-draws every incident lower-triangle cell of one
/// uniformly chosen real node as Bernoulli(0.5); otherwise returns the input.
GraphState ea_mutate(const GraphState& individual, double rate, Rng& rng);
GraphState ea_mutate(const GraphState& individual, double rate, std::uint64_t seed);

/// Evolutionary search over fixed-diagonal graphs: tournament selection,
/// node-connection crossover, 5% mutation, elitism of one. Fitness is the
/// total violation count; the run stops at the first zero-fitness individual.
std::pair<GraphState, SearchStats> ea_generate(const ConstraintSet& cs,
                                               const GraphConfig& config, int max_size,
                                               const EAParams& params);

}  // namespace graphgen
