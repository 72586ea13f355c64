#pragma once

#include <string>
#include <vector>

#include "graphgen/constraints.hpp"
#include "graphgen/graph.hpp"

namespace graphgen {

/// How a freshly generated subgraph attaches to the existing composite:
/// junction edges run from `from_type` nodes of the new subgraph to `to_type`
/// nodes already present.
struct JunctionRule {
  int from_type = 0;
  int to_type = 0;
  int edges_per_subgraph = 1;
};

/// Addresses one node inside a composite: (subgraph index, matrix position).
struct CompositeNodeRef {
  int subgraph = 0;
  int node = 0;

  bool operator==(const CompositeNodeRef&) const = default;
};

/// Several generated graphs stitched together with junction edges. Node names
/// follow the subgraphIndex-nodeIndex schema (both 1-based).
struct CompositeGraph {
  std::vector<GraphState> subgraphs;
  std::vector<std::pair<CompositeNodeRef, CompositeNodeRef>> junctions;

  bool empty() const { return subgraphs.empty(); }
  int total_real_nodes() const;

  /// "2-3" for the third real node of the second subgraph. `node` counts real
  /// (non-padding) nodes only.
  static std::string node_name(int subgraph_index, int node_index);
};

/// Starts a composite from one base graph.
CompositeGraph make_composite(GraphState base);

/// Appends `sub` and draws the rule's junction edges to uniformly chosen
/// partner nodes of the existing composite. The subgraph must already satisfy
/// the constraint set. When enforce_allowance is set (the default), a junction
/// pair the constraint set forbids raises CompositionError.
void concatenate(CompositeGraph& base, GraphState sub, const JunctionRule& rule,
                 const ConstraintSet& cs, Rng& rng, bool enforce_allowance = true);
void concatenate(CompositeGraph& base, GraphState sub, const JunctionRule& rule,
                 const ConstraintSet& cs, std::uint64_t seed, bool enforce_allowance = true);

/// Collapses the composite to one plain graph over its real nodes: all
/// intra-subgraph edges plus the junction edges.
GraphState flatten(const CompositeGraph& composite);

/// True iff the flattened union graph satisfies the constraint set.
bool validate_composite(const CompositeGraph& composite, const ConstraintSet& cs);

}  // namespace graphgen
