#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphgen/graph.hpp"

namespace graphgen {

/// Per-graph violation tally. A disallowed edge is counted once per endpoint,
/// so one bad edge contributes 2 to both disallowed_edges and total.
struct ViolationReport {
  std::vector<int> per_node;
  int total = 0;
  int missing_required = 0;
  int disallowed_edges = 0;
};

/// A parsed constraint set: for every node type, the list of neighbor types it
/// must be connected to, plus the induced allowed-edge relation (the symmetric
/// closure of the requirement lists). Immutable after parse; all checks are
/// pure and safe for concurrent use.
class ConstraintSet {
 public:
  /// Parses the JSON constraint format: an object mapping each type name to
  /// an array of required neighbor type names. Underscore keys are reserved
  /// directives ("_aliases", "_arrows").
  static ConstraintSet parse(const std::string& text);

  const TypeAlphabet& alphabet() const { return alphabet_; }
  int num_node_types() const { return alphabet_.num_node_types(); }
  int empty_code() const { return alphabet_.empty_code(); }

  const std::vector<int>& requires_for(int code) const {
    return requires_.at(static_cast<std::size_t>(code));
  }
  std::uint64_t requires_mask(int code) const {
    return requires_mask_[static_cast<std::size_t>(code)];
  }
  int num_rules() const;

  /// True iff an edge between types a and b is permitted: b in requires(a) or
  /// a in requires(b). Always false when either side is the padding type.
  bool edge_allowed(int a, int b) const {
    return allowed_[static_cast<std::size_t>(a) * static_cast<std::size_t>(alphabet_.size()) +
                    static_cast<std::size_t>(b)] != 0;
  }

  /// Optional arrow annotations from the file's "_arrows" directive,
  /// as (from_code, to_code) pairs. Presentation only.
  const std::vector<std::pair<int, int>>& arrows() const { return arrows_; }

  /// Warnings from the loader (asymmetric requirement lists).
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Verbatim source text, kept for embedding in model artifacts.
  const std::string& source_text() const { return source_text_; }

 private:
  TypeAlphabet alphabet_;
  std::vector<std::vector<int>> requires_;
  std::vector<std::uint64_t> requires_mask_;  // bitmask over type codes
  std::vector<std::uint8_t> allowed_;         // (size x size) row-major
  std::vector<std::pair<int, int>> arrows_;
  std::vector<std::string> warnings_;
  std::string source_text_;
};

/// Reads and parses a constraint file.
ConstraintSet load_constraint_file(const std::string& path);

/// Minimum node count for a satisfiable configuration: 2 when the type
/// requires its own kind (there are no self-loops to satisfy it), else 1.
int min_feasible_count(const ConstraintSet& cs, int code);

/// Structural check plus the satisfiability guard above. Everything that
/// starts a generation run goes through here.
void check_config_feasible(const ConstraintSet& cs, const GraphConfig& config, int max_size);

/// Violations charged to one node: requirement types with no incident
/// neighbor of that type, plus incident edges whose type pair is disallowed.
/// Padding nodes contribute only the disallowed-edge count.
int node_violations(const ConstraintSet& cs, const GraphState& g, int node);

/// Sums node_violations over the whole graph. total == 0 iff the graph is valid.
ViolationReport total_violations(const ConstraintSet& cs, const GraphState& g);

bool is_valid(const ConstraintSet& cs, const GraphState& g);

}  // namespace graphgen
