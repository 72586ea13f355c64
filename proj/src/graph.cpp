#include "graphgen/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace graphgen {

TypeAlphabet TypeAlphabet::from_names(const std::vector<std::string>& names) {
  TypeAlphabet a;
  int code = 0;
  for (const auto& name : names) {
    a.types_.push_back({code++, name, false});
    a.display_.push_back(name);
  }
  a.types_.push_back({code, "_empty", true});
  a.display_.push_back("_empty");
  a.empty_code_ = code;
  return a;
}

std::optional<int> TypeAlphabet::find(const std::string& name) const {
  for (const auto& t : types_) {
    if (t.name == name) return t.code;
  }
  for (const auto& [alias, code] : aliases_) {
    if (alias == name) return code;
  }
  return std::nullopt;
}

void TypeAlphabet::add_alias(const std::string& alias, int code) {
  if (find(alias).has_value()) {
    throw ParseError("alias '" + alias + "' collides with an existing type name");
  }
  aliases_.emplace_back(alias, code);
  auto& d = display_.at(static_cast<std::size_t>(code));
  if (d == types_.at(static_cast<std::size_t>(code)).name) d = alias;
}

const std::string& TypeAlphabet::display_name(int code) const {
  return display_.at(static_cast<std::size_t>(code));
}

CellIndex action_to_cell(int a, int n) {
  if (a < 1 || a > num_cells(n)) {
    throw DomainError("action index " + std::to_string(a) + " outside [1, " +
                      std::to_string(num_cells(n)) + "] for size " + std::to_string(n));
  }
  // Triangular root gives the row; the float estimate is corrected so the
  // mapping stays exact at perfect-square discriminants.
  int row = static_cast<int>(std::ceil((-1.0 + std::sqrt(1.0 + 8.0 * a)) / 2.0));
  while (row > 1 && triang(row - 1) >= a) --row;
  while (triang(row) < a) ++row;
  const int col = a - triang(row - 1) - 1;
  return {row, col};
}

int cell_to_action(const CellIndex& c) {
  if (c.row < 1 || c.col < 0 || c.col >= c.row) {
    throw DomainError("cell (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                      ") is not strictly lower triangular");
  }
  return triang(c.row - 1) + c.col + 1;
}

GraphState::GraphState(std::vector<int> diagonal, int empty_code)
    : diagonal_(std::move(diagonal)),
      edges_(static_cast<std::size_t>(num_cells(static_cast<int>(diagonal_.size()))), 0),
      empty_code_(empty_code) {}

int GraphState::num_real_nodes() const {
  return static_cast<int>(std::count_if(diagonal_.begin(), diagonal_.end(),
                                        [this](int t) { return t != empty_code_; }));
}

bool GraphState::edge(int a, int b) const {
  if (a == b) return false;
  return edge(CellIndex{std::max(a, b), std::min(a, b)});
}

std::size_t GraphState::flat_index(const CellIndex& c) const {
  if (c.row < 1 || c.row >= n() || c.col < 0 || c.col >= c.row) {
    throw DomainError("cell (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                      ") outside the lower triangle of a size-" + std::to_string(n()) +
                      " matrix");
  }
  return static_cast<std::size_t>(triang(c.row - 1) + c.col);
}

GraphState toggle_edge(const GraphState& state, const CellIndex& c) {
  GraphState next = state;
  next.set_edge(c, !state.edge(c));
  return next;
}

void check_config(const GraphConfig& config, int max_size, const TypeAlphabet& alphabet) {
  const int k = alphabet.num_node_types();
  if (static_cast<int>(config.counts.size()) != k) {
    throw ConfigError("configuration lists " + std::to_string(config.counts.size()) +
                      " type counts, alphabet has " + std::to_string(k));
  }
  for (int code = 0; code < k; ++code) {
    if (config.counts[static_cast<std::size_t>(code)] < 1) {
      throw ConfigError("type '" + alphabet.type(code).name +
                        "' needs at least one node in every configuration");
    }
  }
  const int total = std::accumulate(config.counts.begin(), config.counts.end(), 0);
  if (total != config.size) {
    throw ConfigError("type counts sum to " + std::to_string(total) + ", size is " +
                      std::to_string(config.size));
  }
  if (config.size > max_size) {
    throw ConfigError("configuration size " + std::to_string(config.size) +
                      " exceeds maximum size " + std::to_string(max_size));
  }
}

std::vector<int> make_diagonal(const GraphConfig& config, int max_size, int empty_code) {
  std::vector<int> codes;
  codes.reserve(static_cast<std::size_t>(config.size));
  for (int code = 0; code < static_cast<int>(config.counts.size()); ++code) {
    for (int i = 0; i < config.counts[static_cast<std::size_t>(code)]; ++i) {
      codes.push_back(code);
    }
  }
  codes.resize(static_cast<std::size_t>(max_size), empty_code);
  return codes;
}

void randomize_edges(GraphState& state, double edge_prob, Rng& rng) {
  for (int row = 1; row < state.n(); ++row) {
    for (int col = 0; col < row; ++col) {
      const CellIndex c{row, col};
      if (state.node_is_empty(row) || state.node_is_empty(col)) {
        state.set_edge(c, false);
      } else {
        state.set_edge(c, rng.bernoulli(edge_prob));
      }
    }
  }
}

GraphState init_random(const GraphConfig& config, int max_size, double edge_prob,
                       const TypeAlphabet& alphabet, Rng& rng) {
  check_config(config, max_size, alphabet);
  GraphState state(make_diagonal(config, max_size, alphabet.empty_code()),
                   alphabet.empty_code());
  randomize_edges(state, edge_prob, rng);
  return state;
}

GraphState init_random(const GraphConfig& config, int max_size, double edge_prob,
                       const TypeAlphabet& alphabet, std::uint64_t seed) {
  Rng rng(seed);
  return init_random(config, max_size, edge_prob, alphabet, rng);
}

}  // namespace graphgen
