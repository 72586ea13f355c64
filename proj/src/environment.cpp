#include "graphgen/environment.hpp"

#include <algorithm>

#include <json.hpp>

namespace graphgen {

std::string representation_name(Representation repr) {
  switch (repr) {
    case Representation::graph_narrow: return "graph-narrow";
    case Representation::graph_wide: return "graph-wide";
    case Representation::pcgrl_wide: return "pcgrl-wide";
  }
  return "unknown";
}

Representation representation_from_name(const std::string& name) {
  if (name == "graph-narrow" || name == "narrow") return Representation::graph_narrow;
  if (name == "graph-wide" || name == "wide") return Representation::graph_wide;
  if (name == "pcgrl-wide" || name == "pcgrl") return Representation::pcgrl_wide;
  throw ParseError("unknown representation '" + name +
                   "' (expected graph-narrow, graph-wide, or pcgrl-wide)");
}

std::string termination_cause_name(TerminationCause cause) {
  switch (cause) {
    case TerminationCause::none: return "none";
    case TerminationCause::valid: return "valid";
    case TerminationCause::change_limit: return "change-limit";
    case TerminationCause::iteration_limit: return "iteration-limit";
    case TerminationCause::sweep_complete: return "sweep-complete";
  }
  return "unknown";
}

EnvSpec make_env_spec(ConstraintSet constraints, std::string constraints_path, int max_size) {
  EnvSpec spec;
  spec.max_size = max_size;
  spec.constraints = std::move(constraints);
  spec.constraints_path = std::move(constraints_path);
  spec.max_changes = num_cells(max_size);
  spec.max_iterations = 2 * num_cells(max_size);
  return spec;
}

std::string env_spec_to_json(const EnvSpec& spec, Representation repr) {
  nlohmann::ordered_json doc;
  doc["max_size"] = spec.max_size;
  doc["constraints_path"] = spec.constraints_path;
  doc["alpha"] = spec.alpha;
  doc["max_changes"] = spec.max_changes;
  doc["max_iterations"] = spec.max_iterations;
  doc["edge_prob"] = spec.edge_prob;
  doc["representation"] = representation_name(repr);
  return doc.dump();
}

namespace {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return result;
}

// Compositions of `size` into k positive parts, unranked lexicographically:
// rank counts compositions whose first part is smaller.
std::vector<int> unrank_composition(int size, int k, std::int64_t rank) {
  std::vector<int> parts;
  parts.reserve(static_cast<std::size_t>(k));
  int remaining = size;
  for (int position = 0; position < k - 1; ++position) {
    const int parts_left = k - position - 1;
    int part = 1;
    for (;; ++part) {
      const std::int64_t with_this_part = binomial(remaining - part - 1, parts_left - 1);
      if (rank < with_this_part) break;
      rank -= with_this_part;
    }
    parts.push_back(part);
    remaining -= part;
  }
  parts.push_back(remaining);
  return parts;
}

// Counts above one per type shift the composition problem: a draw with
// part_i >= m_i is a positive composition of size - sum(m_i - 1).
int feasibility_surplus(const ConstraintSet& cs) {
  int surplus = 0;
  for (int code = 0; code < cs.num_node_types(); ++code) {
    surplus += min_feasible_count(cs, code) - 1;
  }
  return surplus;
}

GraphConfig shifted_counts(const ConstraintSet& cs, int size, int shifted_size, int k,
                           std::int64_t rank) {
  GraphConfig config{size, unrank_composition(shifted_size, k, rank)};
  for (int code = 0; code < k; ++code) {
    config.counts[static_cast<std::size_t>(code)] += min_feasible_count(cs, code) - 1;
  }
  return config;
}

}  // namespace

std::int64_t count_configurations(const ConstraintSet& cs, int max_size) {
  const int k = cs.num_node_types();
  const int surplus = feasibility_surplus(cs);
  std::int64_t total = 0;
  for (int size = k + surplus; size <= max_size; ++size) {
    total += binomial(size - surplus - 1, k - 1);
  }
  return total;
}

GraphConfig sample_configuration(const ConstraintSet& cs, int max_size, Rng& rng) {
  const int k = cs.num_node_types();
  const int surplus = feasibility_surplus(cs);
  if (max_size < k + surplus) {
    throw ConfigError("maximum size " + std::to_string(max_size) +
                      " cannot host a feasible configuration of all " + std::to_string(k) +
                      " node types");
  }
  const std::int64_t total = count_configurations(cs, max_size);
  std::int64_t rank = rng.uniform_int(0, total - 1);
  int size = k + surplus;
  for (;; ++size) {
    const std::int64_t in_size = binomial(size - surplus - 1, k - 1);
    if (rank < in_size) break;
    rank -= in_size;
  }
  return shifted_counts(cs, size, size - surplus, k, rank);
}

GraphConfig sample_configuration(const ConstraintSet& cs, int max_size, std::uint64_t seed) {
  Rng rng(seed);
  return sample_configuration(cs, max_size, rng);
}

GraphConfig sample_counts_for_size(const ConstraintSet& cs, int size, Rng& rng) {
  const int k = cs.num_node_types();
  const int surplus = feasibility_surplus(cs);
  if (size < k + surplus) {
    throw ConfigError("size " + std::to_string(size) +
                      " cannot host a feasible configuration of all " + std::to_string(k) +
                      " node types");
  }
  const std::int64_t total = binomial(size - surplus - 1, k - 1);
  const std::int64_t rank = rng.uniform_int(0, total - 1);
  return shifted_counts(cs, size, size - surplus, k, rank);
}

double compute_reward(const GraphState& prev, const GraphState& next, const ConstraintSet& cs,
                      double alpha) {
  const int before = total_violations(cs, prev).total;
  const int after = total_violations(cs, next).total;
  const double v = static_cast<double>(before - after);
  return v + (after == 0 ? alpha : 0.0);
}

Observation encode_observation(const GraphState& g, Representation repr,
                               const TypeAlphabet& alphabet, std::optional<CellIndex> cursor) {
  const int depth = alphabet.size() + 2;
  const int n = g.n();
  Observation obs;
  obs.depth = depth;

  const auto hot = [&](int cell, int channel) {
    obs.data[static_cast<std::size_t>(cell) * static_cast<std::size_t>(depth) +
             static_cast<std::size_t>(channel)] = 1.0;
  };

  if (repr == Representation::graph_narrow) {
    if (!cursor.has_value()) {
      throw ContractError("narrow observations need the environment-selected cell");
    }
    // Two node views: type code first, then the full symmetric connection row
    // read partner-first (rotated to start at the other endpoint). Like the
    // cropping in the parent framework's narrow mode, the read is relative to
    // the selected position, so the cell under the cursor is always entry one.
    obs.rows = 2;
    obs.cols = n + 1;
    obs.data.assign(static_cast<std::size_t>(2 * (n + 1)) * static_cast<std::size_t>(depth), 0.0);
    const int nodes[2] = {cursor->row, cursor->col};
    const int partners[2] = {cursor->col, cursor->row};
    for (int v = 0; v < 2; ++v) {
      const int node = nodes[v];
      const int base = v * (n + 1);
      hot(base, 2 + g.type_of(node));
      for (int j = 0; j < n; ++j) {
        const int other = (partners[v] + j) % n;
        hot(base + 1 + j, g.edge(node, other) ? 1 : 0);
      }
    }
    return obs;
  }

  if (cursor.has_value()) {
    throw ContractError("wide observations take no cursor");
  }
  obs.rows = n;
  obs.cols = n;
  obs.data.assign(static_cast<std::size_t>(n * n) * static_cast<std::size_t>(depth), 0.0);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const int cell = row * n + col;
      if (row == col) {
        hot(cell, 2 + g.type_of(row));
      } else if (row > col) {
        hot(cell, g.edge(CellIndex{row, col}) ? 1 : 0);
      } else {
        hot(cell, 0);  // the unused upper triangle reads as no-edge
      }
    }
  }
  return obs;
}

int Environment::action_space_size(Representation repr, int max_size) {
  switch (repr) {
    case Representation::graph_narrow: return 2;
    case Representation::graph_wide: return 2 * num_cells(max_size);
    case Representation::pcgrl_wide: return 2 * max_size * max_size;
  }
  return 0;
}

int Environment::observation_size(Representation repr, int max_size, int alphabet_size) {
  const int depth = alphabet_size + 2;
  if (repr == Representation::graph_narrow) return 2 * (max_size + 1) * depth;
  return max_size * max_size * depth;
}

Environment::Environment(EnvSpec spec, Representation repr, std::uint64_t seed)
    : spec_(std::move(spec)), repr_(repr), rng_(seed) {
  if (spec_.max_size < 2) throw ConfigError("maximum size must be at least 2");
  if (spec_.max_changes > spec_.max_iterations) {
    throw ConfigError("max_changes must not exceed max_iterations");
  }
  if (spec_.alpha < 0.0) throw ConfigError("alpha must be non-negative");
}

const Observation& Environment::reset(const GraphConfig& config) {
  check_config_feasible(spec_.constraints, config, spec_.max_size);
  config_ = config;
  return finish_reset();
}

const Observation& Environment::reset() {
  config_ = sample_configuration(spec_.constraints, spec_.max_size, rng_);
  return finish_reset();
}

const Observation& Environment::finish_reset() {
  state_ = init_random(config_, spec_.max_size, spec_.edge_prob,
                       spec_.constraints.alphabet(), rng_);
  iterations_ = 0;
  changes_ = 0;
  done_ = false;
  sweep_.clear();
  cursor_ = 0;
  if (repr_ == Representation::graph_narrow) {
    // Every lower-triangle cell between two real nodes, visited once per episode.
    for (int row = 1; row < state_.n(); ++row) {
      for (int col = 0; col < row; ++col) {
        if (!state_.node_is_empty(row) && !state_.node_is_empty(col)) {
          sweep_.push_back(CellIndex{row, col});
        }
      }
    }
  }
  refresh_observation();
  return observation_;
}

std::optional<CellIndex> Environment::cursor_cell() const {
  if (repr_ != Representation::graph_narrow) return std::nullopt;
  if (sweep_.empty()) return CellIndex{1, 0};
  return sweep_[std::min(cursor_, sweep_.size() - 1)];
}

void Environment::refresh_observation() {
  observation_ = encode_observation(state_, repr_, spec_.constraints.alphabet(), cursor_cell());
}

StepOutcome Environment::step(int action) {
  if (done_) throw ContractError("step() called on a finished episode; reset first");
  if (action < 0 || action >= action_space_size()) {
    throw DomainError("action " + std::to_string(action) + " outside [0, " +
                      std::to_string(action_space_size()) + ")");
  }

  const GraphState prev = state_;
  switch (repr_) {
    case Representation::graph_narrow: {
      if (cursor_ < sweep_.size()) {
        const CellIndex cell = sweep_[cursor_];
        if (action == 1) state_.set_edge(cell, !state_.edge(cell));
        ++cursor_;
      }
      break;
    }
    case Representation::graph_wide: {
      // Position-major flattening: action = 2 * (position - 1) + toggle flag.
      const int position = action / 2 + 1;
      const int flag = action % 2;
      const CellIndex cell = action_to_cell(position, spec_.max_size);
      if (flag == 1) state_.set_edge(cell, !state_.edge(cell));
      break;
    }
    case Representation::pcgrl_wide: {
      const int value = action % 2;
      const int grid = action / 2;
      const int row = grid / spec_.max_size;
      const int col = grid % spec_.max_size;
      if (row > col) {
        state_.set_edge(CellIndex{row, col}, value == 1);
      }
      // Diagonal and upper-triangle writes burn the iteration with no effect.
      break;
    }
  }

  const bool changed = !(state_ == prev);
  ++iterations_;
  if (changed) ++changes_;

  const int before = total_violations(spec_.constraints, prev).total;
  const int after = total_violations(spec_.constraints, state_).total;
  const bool valid = after == 0;
  const double reward = static_cast<double>(before - after) + (valid ? spec_.alpha : 0.0);

  TerminationCause cause = TerminationCause::none;
  if (valid) {
    cause = TerminationCause::valid;
  } else if (changes_ > spec_.max_changes) {
    cause = TerminationCause::change_limit;
  } else if (iterations_ >= spec_.max_iterations) {
    cause = TerminationCause::iteration_limit;
  } else if (repr_ == Representation::graph_narrow && cursor_ >= sweep_.size()) {
    cause = TerminationCause::sweep_complete;
  }
  done_ = cause != TerminationCause::none;

  refresh_observation();

  StepOutcome outcome;
  outcome.observation = observation_;
  outcome.reward = reward;
  outcome.done = done_;
  outcome.info = StepInfo{changed, valid, iterations_, changes_, cause};
  return outcome;
}

}  // namespace graphgen
