#include "graphgen/composer.hpp"

#include <algorithm>

namespace graphgen {

namespace {

std::vector<int> nodes_of_type(const GraphState& g, int type) {
  std::vector<int> out;
  for (int i = 0; i < g.n(); ++i) {
    if (g.type_of(i) == type) out.push_back(i);
  }
  return out;
}

}  // namespace

int CompositeGraph::total_real_nodes() const {
  int total = 0;
  for (const auto& g : subgraphs) total += g.num_real_nodes();
  return total;
}

std::string CompositeGraph::node_name(int subgraph_index, int node_index) {
  return std::to_string(subgraph_index + 1) + "-" + std::to_string(node_index + 1);
}

CompositeGraph make_composite(GraphState base) {
  CompositeGraph c;
  c.subgraphs.push_back(std::move(base));
  return c;
}

void concatenate(CompositeGraph& base, GraphState sub, const JunctionRule& rule,
                 const ConstraintSet& cs, Rng& rng, bool enforce_allowance) {
  if (base.empty()) throw CompositionError("composite has no base graph to attach to");
  if (!is_valid(cs, sub)) throw CompositionError("subgraph is not valid under the constraint set");
  if (enforce_allowance && !cs.edge_allowed(rule.from_type, rule.to_type)) {
    throw CompositionError("junction pair '" + cs.alphabet().type(rule.from_type).name + "'-'" +
                           cs.alphabet().type(rule.to_type).name +
                           "' is not allowed by the constraint set");
  }

  const auto from_nodes = nodes_of_type(sub, rule.from_type);
  if (from_nodes.empty()) {
    throw CompositionError("subgraph has no node of junction type '" +
                           cs.alphabet().type(rule.from_type).name + "'");
  }
  // Candidate targets across every subgraph already in the composite.
  std::vector<CompositeNodeRef> to_nodes;
  for (int s = 0; s < static_cast<int>(base.subgraphs.size()); ++s) {
    for (const int node : nodes_of_type(base.subgraphs[static_cast<std::size_t>(s)],
                                        rule.to_type)) {
      to_nodes.push_back({s, node});
    }
  }
  if (to_nodes.empty()) {
    throw CompositionError("composite has no node of junction type '" +
                           cs.alphabet().type(rule.to_type).name + "'");
  }

  const int sub_index = static_cast<int>(base.subgraphs.size());
  base.subgraphs.push_back(std::move(sub));
  for (int e = 0; e < rule.edges_per_subgraph; ++e) {
    const int from =
        from_nodes[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(from_nodes.size()) - 1))];
    const auto to =
        to_nodes[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(to_nodes.size()) - 1))];
    base.junctions.emplace_back(CompositeNodeRef{sub_index, from}, to);
  }
}

void concatenate(CompositeGraph& base, GraphState sub, const JunctionRule& rule,
                 const ConstraintSet& cs, std::uint64_t seed, bool enforce_allowance) {
  Rng rng(seed);
  concatenate(base, std::move(sub), rule, cs, rng, enforce_allowance);
}

GraphState flatten(const CompositeGraph& composite) {
  // Real nodes of every subgraph get consecutive flat indices, in subgraph
  // order then matrix order.
  std::vector<std::vector<int>> flat_index(composite.subgraphs.size());
  std::vector<int> diagonal;
  int empty_code = -1;
  for (std::size_t s = 0; s < composite.subgraphs.size(); ++s) {
    const auto& g = composite.subgraphs[s];
    empty_code = g.empty_code();
    flat_index[s].assign(static_cast<std::size_t>(g.n()), -1);
    for (int node = 0; node < g.n(); ++node) {
      if (g.node_is_empty(node)) continue;
      flat_index[s][static_cast<std::size_t>(node)] = static_cast<int>(diagonal.size());
      diagonal.push_back(g.type_of(node));
    }
  }

  GraphState flat(std::move(diagonal), empty_code);
  for (std::size_t s = 0; s < composite.subgraphs.size(); ++s) {
    const auto& g = composite.subgraphs[s];
    for (int row = 1; row < g.n(); ++row) {
      for (int col = 0; col < row; ++col) {
        if (!g.edge(CellIndex{row, col})) continue;
        const int a = flat_index[s][static_cast<std::size_t>(row)];
        const int b = flat_index[s][static_cast<std::size_t>(col)];
        if (a < 0 || b < 0) continue;  // padding-incident noise never flattens
        flat.set_edge(CellIndex{std::max(a, b), std::min(a, b)}, true);
      }
    }
  }
  for (const auto& [from, to] : composite.junctions) {
    const int a = flat_index[static_cast<std::size_t>(from.subgraph)]
                            [static_cast<std::size_t>(from.node)];
    const int b = flat_index[static_cast<std::size_t>(to.subgraph)]
                            [static_cast<std::size_t>(to.node)];
    if (a == b) continue;
    flat.set_edge(CellIndex{std::max(a, b), std::min(a, b)}, true);
  }
  return flat;
}

bool validate_composite(const CompositeGraph& composite, const ConstraintSet& cs) {
  if (composite.empty()) return false;
  return is_valid(cs, flatten(composite));
}

}  // namespace graphgen
