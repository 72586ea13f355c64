#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphgen/errors.hpp"
#include "graphgen/rng.hpp"

namespace graphgen {

/// One symbol of the node alphabet. Codes are dense (0..k) and stable for the
/// lifetime of the alphabet; exactly one type is the empty padding symbol.
struct NodeType {
  int code = 0;
  std::string name;
  bool is_empty = false;
};

/// The node-type alphabet of a constraint set: the declared types plus one
/// reserved padding type (always the highest code, name "_empty").
class TypeAlphabet {
 public:
  TypeAlphabet() = default;

  /// Builds an alphabet from declared type names, appending the padding type.
  static TypeAlphabet from_names(const std::vector<std::string>& names);

  int size() const { return static_cast<int>(types_.size()); }
  int num_node_types() const { return size() - 1; }  // excludes padding
  int empty_code() const { return empty_code_; }
  bool is_empty(int code) const { return code == empty_code_; }

  const NodeType& type(int code) const { return types_.at(static_cast<std::size_t>(code)); }
  const std::vector<NodeType>& types() const { return types_; }

  /// Looks a type up by primary name or registered alias.
  std::optional<int> find(const std::string& name) const;

  /// Registers a display alias (e.g. "Source" -> "U"). The alias must not
  /// collide with an existing name.
  void add_alias(const std::string& alias, int code);

  /// Preferred label for rendering: the first alias if any, else the name.
  const std::string& display_name(int code) const;

 private:
  std::vector<NodeType> types_;
  std::vector<std::pair<std::string, int>> aliases_;  // insertion order kept
  std::vector<std::string> display_;                  // per code
  int empty_code_ = -1;
};

/// Target of a generation run: total node count plus exact per-type counts
/// (indexed by type code, padding excluded). Every type has count >= 1 so a
/// valid graph always exists for the shipped constraint sets.
struct GraphConfig {
  int size = 0;
  std::vector<int> counts;  // length = num_node_types

  int count_for(int code) const { return counts.at(static_cast<std::size_t>(code)); }
};

/// A strictly-lower-triangle cell: row in [1, n-1], col in [0, row-1].
struct CellIndex {
  int row = 0;
  int col = 0;

  bool operator==(const CellIndex&) const = default;
};

/// n-th triangular number, n*(n+1)/2.
constexpr int triang(int n) { return n * (n + 1) / 2; }

/// Number of actionable lower-triangle cells of an n x n matrix.
constexpr int num_cells(int n) { return triang(n - 1); }

/// Maps a 1-based action index onto its lower-triangle cell. The mapping
/// enumerates cells in row-major order: (1,0), (2,0), (2,1), (3,0), ...
/// Throws DomainError if a is outside [1, triang(n-1)].
CellIndex action_to_cell(int a, int n);

/// Inverse of action_to_cell: triang(row-1) + col + 1.
/// Throws DomainError if the cell is not strictly lower triangular.
int cell_to_action(const CellIndex& c);

/// Extended adjacency matrix: node-type codes on the diagonal, undirected
/// binary edges in the strict lower triangle. The upper triangle carries no
/// information. The diagonal never changes during an episode.
class GraphState {
 public:
  GraphState() = default;
  GraphState(std::vector<int> diagonal, int empty_code);

  int n() const { return static_cast<int>(diagonal_.size()); }
  int type_of(int node) const { return diagonal_.at(static_cast<std::size_t>(node)); }
  const std::vector<int>& diagonal() const { return diagonal_; }
  int empty_code() const { return empty_code_; }
  bool node_is_empty(int node) const { return type_of(node) == empty_code_; }

  /// Count of nodes that are not padding.
  int num_real_nodes() const;

  bool edge(const CellIndex& c) const { return edges_[flat_index(c)] != 0; }
  bool edge(int a, int b) const;  // either order; false for a == b
  void set_edge(const CellIndex& c, bool present) { edges_[flat_index(c)] = present ? 1 : 0; }

  const std::vector<std::uint8_t>& edge_cells() const { return edges_; }

  bool operator==(const GraphState&) const = default;

 private:
  std::size_t flat_index(const CellIndex& c) const;

  std::vector<int> diagonal_;
  std::vector<std::uint8_t> edges_;  // row-major lower triangle, triang(n-1) cells
  int empty_code_ = -1;
};

/// Returns state with cell c flipped; everything else untouched.
/// Throws DomainError for diagonal or upper-triangle cells.
GraphState toggle_edge(const GraphState& state, const CellIndex& c);

/// Diagonal for a configuration: the configured type codes grouped in code
/// order on positions [0, size), padding after. Placement is a deterministic
/// function of the configuration; all per-episode randomness lives in the
/// edge noise.
std::vector<int> make_diagonal(const GraphConfig& config, int max_size, int empty_code);

/// Re-draws every lower-triangle cell between two non-padding nodes as an
/// independent Bernoulli(edge_prob); padding-incident cells are cleared.
void randomize_edges(GraphState& state, double edge_prob, Rng& rng);

/// Random starting state: the configuration's diagonal plus Bernoulli(edge_prob)
/// noise between real nodes. Deterministic given the seed.
/// Throws ConfigError for infeasible configurations.
GraphState init_random(const GraphConfig& config, int max_size, double edge_prob,
                       const TypeAlphabet& alphabet, Rng& rng);
GraphState init_random(const GraphConfig& config, int max_size, double edge_prob,
                       const TypeAlphabet& alphabet, std::uint64_t seed);

/// Validates a configuration against an alphabet: counts for every type,
/// every count >= 1, sum equal to size, size within max_size.
void check_config(const GraphConfig& config, int max_size, const TypeAlphabet& alphabet);

}  // namespace graphgen
