#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphgen/constraints.hpp"
#include "graphgen/graph.hpp"

namespace graphgen {

/// The observation/action scheme an agent is trained against.
///  - graph_narrow: the environment walks the lower-triangle cells; the agent
///    only decides keep-or-toggle at the current cell.
///  - graph_wide: the agent picks any lower-triangle cell plus a toggle flag.
///  - pcgrl_wide: full-grid baseline; the agent writes a value anywhere in the
///    matrix, but diagonal and upper-triangle writes are ignored.
enum class Representation { graph_narrow, graph_wide, pcgrl_wide };

std::string representation_name(Representation repr);
Representation representation_from_name(const std::string& name);

/// Fixed parameters of an episode family. Limits default to the action-space
/// scale: max_changes = triang(max_size-1), max_iterations twice that.
struct EnvSpec {
  int max_size = 0;
  ConstraintSet constraints;
  std::string constraints_path;
  double alpha = 5.0;
  int max_changes = 0;
  int max_iterations = 0;
  double edge_prob = 0.5;
};

EnvSpec make_env_spec(ConstraintSet constraints, std::string constraints_path, int max_size);

/// The {max_size, constraints_path, alpha, max_changes, max_iterations,
/// edge_prob, representation} JSON block embedded in model artifacts.
std::string env_spec_to_json(const EnvSpec& spec, Representation repr);

enum class TerminationCause { none, valid, change_limit, iteration_limit, sweep_complete };

std::string termination_cause_name(TerminationCause cause);

/// One-hot encoding of a state. Channel 0 is no-edge, channel 1 edge, then one
/// channel per type code (padding included). Wide kinds see the whole matrix;
/// narrow sees the two nodes of the cursor cell with their connection rows.
struct Observation {
  std::vector<double> data;
  int rows = 0;
  int cols = 0;
  int depth = 0;

  int size() const { return static_cast<int>(data.size()); }
  bool operator==(const Observation&) const = default;
};

struct StepInfo {
  bool changed = false;
  bool valid = false;
  int iterations = 0;
  int changes = 0;
  TerminationCause cause = TerminationCause::none;
};

struct StepOutcome {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

/// Number of feasible (size, counts) configurations up to max_size: every
/// type present, self-requiring types present at least twice.
std::int64_t count_configurations(const ConstraintSet& cs, int max_size);

/// Uniform draw over all feasible configurations up to max_size.
GraphConfig sample_configuration(const ConstraintSet& cs, int max_size, Rng& rng);
GraphConfig sample_configuration(const ConstraintSet& cs, int max_size, std::uint64_t seed);

/// Uniform draw over the feasible per-type counts for one fixed size.
GraphConfig sample_counts_for_size(const ConstraintSet& cs, int size, Rng& rng);

/// Step reward: the drop in total violations caused by the transition, plus
/// alpha exactly when the resulting graph is valid.
double compute_reward(const GraphState& prev, const GraphState& next, const ConstraintSet& cs,
                      double alpha);

/// One-hot observation for a state. The cursor must be present exactly for
/// the narrow representation.
Observation encode_observation(const GraphState& g, Representation repr,
                               const TypeAlphabet& alphabet,
                               std::optional<CellIndex> cursor = std::nullopt);

/// A mutable episode. Instances are single-threaded; run several instances
/// for parallel rollouts. All randomness flows from the constructor seed, so
/// identical (spec, repr, config, seed, actions) replays identically.
class Environment {
 public:
  Environment(EnvSpec spec, Representation repr, std::uint64_t seed);

  /// Starts an episode from random noise with an explicit configuration.
  const Observation& reset(const GraphConfig& config);

  /// Starts an episode with a freshly sampled configuration (training mode).
  const Observation& reset();

  /// Applies one action. Throws DomainError for out-of-range actions and
  /// ContractError when called on a finished episode.
  StepOutcome step(int action);

  int action_space_size() const { return action_space_size(repr_, spec_.max_size); }
  int observation_size() const {
    return observation_size(repr_, spec_.max_size, spec_.constraints.alphabet().size());
  }
  static int action_space_size(Representation repr, int max_size);
  static int observation_size(Representation repr, int max_size, int alphabet_size);

  const GraphState& state() const { return state_; }
  const Observation& observation() const { return observation_; }
  const EnvSpec& spec() const { return spec_; }
  Representation representation() const { return repr_; }
  const GraphConfig& config() const { return config_; }
  bool done() const { return done_; }
  int iterations() const { return iterations_; }
  int changes() const { return changes_; }

 private:
  const Observation& finish_reset();
  void refresh_observation();
  std::optional<CellIndex> cursor_cell() const;

  EnvSpec spec_;
  Representation repr_;
  Rng rng_;
  GraphState state_;
  GraphConfig config_;
  Observation observation_;
  std::vector<CellIndex> sweep_;  // narrow: eligible cells in row-major order
  std::size_t cursor_ = 0;
  int iterations_ = 0;
  int changes_ = 0;
  bool done_ = true;
};

}  // namespace graphgen
