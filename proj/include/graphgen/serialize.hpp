#pragma once

#include <string>

#include "graphgen/composer.hpp"
#include "graphgen/constraints.hpp"
#include "graphgen/graph.hpp"

namespace graphgen {

/// Graph JSON: {"nodes":[{"id":0,"type":"Source"},...],"edges":[[1,0],...]}.
/// Ids are matrix positions; padding nodes and their cells are omitted.
std::string graph_to_json(const GraphState& state, const TypeAlphabet& alphabet);

/// Parses the graph JSON format against an alphabet. Unlisted ids below the
/// maximum become padding nodes, so round-trips preserve positions.
GraphState graph_from_json(const std::string& text, const TypeAlphabet& alphabet);

/// Graphviz DOT for one graph. Undirected layout; edges between types named
/// by the constraint set's arrow annotations get a direction head.
std::string graph_to_dot(const GraphState& state, const ConstraintSet& cs);

/// Composite JSON: the graph format plus per-node "name" (subgraphIndex-nodeIndex)
/// and "subgraph" provenance; flat ids match flatten()'s ordering.
std::string composite_to_json(const CompositeGraph& composite, const TypeAlphabet& alphabet);

/// DOT with one fill color per subgraph and junction edges drawn dashed.
std::string composite_to_dot(const CompositeGraph& composite, const ConstraintSet& cs);

/// Whole-file helpers.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace graphgen
