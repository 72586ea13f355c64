#include "graphgen/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace graphgen {

namespace {

using ordered_json = nlohmann::ordered_json;

// Fill palette per subgraph index, first entries matching the usual
// base-then-extensions reading order.
const char* const kPalette[] = {"#7da7d9", "#8fc98f", "#f2a45c",
                                "#e06666", "#b7b7b7", "#c27ba0"};
constexpr int kPaletteSize = 6;

const char* const kShapes[] = {"ellipse", "box", "diamond", "hexagon", "octagon"};
constexpr int kShapeCount = 5;

const char* shape_for(int code) { return kShapes[code % kShapeCount]; }

bool arrow_between(const ConstraintSet& cs, int type_a, int type_b, bool& a_to_b) {
  for (const auto& [from, to] : cs.arrows()) {
    if (from == type_a && to == type_b) {
      a_to_b = true;
      return true;
    }
    if (from == type_b && to == type_a) {
      a_to_b = false;
      return true;
    }
  }
  return false;
}

}  // namespace

std::string graph_to_json(const GraphState& state, const TypeAlphabet& alphabet) {
  ordered_json doc;
  doc["nodes"] = ordered_json::array();
  for (int node = 0; node < state.n(); ++node) {
    if (state.node_is_empty(node)) continue;
    doc["nodes"].push_back({{"id", node}, {"type", alphabet.type(state.type_of(node)).name}});
  }
  doc["edges"] = ordered_json::array();
  for (int row = 1; row < state.n(); ++row) {
    for (int col = 0; col < row; ++col) {
      if (!state.edge(CellIndex{row, col})) continue;
      if (state.node_is_empty(row) || state.node_is_empty(col)) continue;
      doc["edges"].push_back({row, col});
    }
  }
  return doc.dump(2) + "\n";
}

GraphState graph_from_json(const std::string& text, const TypeAlphabet& alphabet) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("graph file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges")) {
    throw ParseError("graph file must be an object with 'nodes' and 'edges'");
  }

  int max_id = -1;
  for (const auto& node : doc["nodes"]) {
    if (!node.contains("id") || !node.contains("type")) {
      throw ParseError("every node needs 'id' and 'type'");
    }
    max_id = std::max(max_id, node["id"].get<int>());
  }
  if (max_id < 0) throw ParseError("graph file lists no nodes");

  std::vector<int> diagonal(static_cast<std::size_t>(max_id) + 1, alphabet.empty_code());
  for (const auto& node : doc["nodes"]) {
    const int id = node["id"].get<int>();
    if (id < 0) throw ParseError("node ids must be non-negative");
    const auto type_name = node["type"].get<std::string>();
    const auto code = alphabet.find(type_name);
    if (!code.has_value() || alphabet.is_empty(*code)) {
      throw ParseError("graph references type '" + type_name +
                       "' absent from the constraint file");
    }
    diagonal[static_cast<std::size_t>(id)] = *code;
  }

  GraphState state(std::move(diagonal), alphabet.empty_code());
  for (const auto& pair : doc["edges"]) {
    if (!pair.is_array() || pair.size() != 2) {
      throw ParseError("edges must be [row, col] pairs");
    }
    const int a = pair[0].get<int>();
    const int b = pair[1].get<int>();
    if (a == b) throw ParseError("self-loop on node " + std::to_string(a));
    if (a < 0 || b < 0 || a >= state.n() || b >= state.n()) {
      throw ParseError("edge [" + std::to_string(a) + "," + std::to_string(b) +
                       "] references a missing node");
    }
    state.set_edge(CellIndex{std::max(a, b), std::min(a, b)}, true);
  }
  return state;
}

std::string graph_to_dot(const GraphState& state, const ConstraintSet& cs) {
  const auto& alphabet = cs.alphabet();
  std::ostringstream out;
  out << "graph generated {\n";
  out << "  node [style=filled, fillcolor=\"" << kPalette[0] << "\"];\n";
  for (int node = 0; node < state.n(); ++node) {
    if (state.node_is_empty(node)) continue;
    const int type = state.type_of(node);
    out << "  n" << node << " [label=\"" << alphabet.display_name(type) << " " << node
        << "\", shape=" << shape_for(type) << "];\n";
  }
  for (int row = 1; row < state.n(); ++row) {
    for (int col = 0; col < row; ++col) {
      if (!state.edge(CellIndex{row, col})) continue;
      if (state.node_is_empty(row) || state.node_is_empty(col)) continue;
      bool row_to_col = false;
      if (arrow_between(cs, state.type_of(row), state.type_of(col), row_to_col)) {
        const int head = row_to_col ? col : row;
        const int tail = row_to_col ? row : col;
        out << "  n" << tail << " -- n" << head << " [dir=forward];\n";
      } else {
        out << "  n" << row << " -- n" << col << ";\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

std::string composite_to_json(const CompositeGraph& composite, const TypeAlphabet& alphabet) {
  // Flat ids must agree with flatten(): subgraph order, then matrix order.
  std::vector<std::vector<int>> flat_index(composite.subgraphs.size());
  ordered_json nodes = ordered_json::array();
  int next_id = 0;
  for (std::size_t s = 0; s < composite.subgraphs.size(); ++s) {
    const auto& g = composite.subgraphs[s];
    flat_index[s].assign(static_cast<std::size_t>(g.n()), -1);
    int real_index = 0;
    for (int node = 0; node < g.n(); ++node) {
      if (g.node_is_empty(node)) continue;
      flat_index[s][static_cast<std::size_t>(node)] = next_id;
      nodes.push_back({{"id", next_id},
                       {"name", CompositeGraph::node_name(static_cast<int>(s), real_index)},
                       {"type", alphabet.type(g.type_of(node)).name},
                       {"subgraph", static_cast<int>(s)}});
      ++next_id;
      ++real_index;
    }
  }

  ordered_json edges = ordered_json::array();
  for (std::size_t s = 0; s < composite.subgraphs.size(); ++s) {
    const auto& g = composite.subgraphs[s];
    for (int row = 1; row < g.n(); ++row) {
      for (int col = 0; col < row; ++col) {
        if (!g.edge(CellIndex{row, col})) continue;
        const int a = flat_index[s][static_cast<std::size_t>(row)];
        const int b = flat_index[s][static_cast<std::size_t>(col)];
        if (a < 0 || b < 0) continue;
        edges.push_back({std::max(a, b), std::min(a, b)});
      }
    }
  }
  for (const auto& [from, to] : composite.junctions) {
    const int a = flat_index[static_cast<std::size_t>(from.subgraph)]
                            [static_cast<std::size_t>(from.node)];
    const int b = flat_index[static_cast<std::size_t>(to.subgraph)]
                            [static_cast<std::size_t>(to.node)];
    edges.push_back({std::max(a, b), std::min(a, b)});
  }

  ordered_json doc;
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

std::string composite_to_dot(const CompositeGraph& composite, const ConstraintSet& cs) {
  const auto& alphabet = cs.alphabet();
  std::ostringstream out;
  out << "graph composite {\n";
  out << "  node [style=filled];\n";
  for (std::size_t s = 0; s < composite.subgraphs.size(); ++s) {
    const auto& g = composite.subgraphs[s];
    int real_index = 0;
    for (int node = 0; node < g.n(); ++node) {
      if (g.node_is_empty(node)) continue;
      const int type = g.type_of(node);
      const auto name = CompositeGraph::node_name(static_cast<int>(s), real_index);
      out << "  \"" << name << "\" [label=\"" << alphabet.display_name(type) << " " << name
          << "\", shape=" << shape_for(type) << ", fillcolor=\""
          << kPalette[s % kPaletteSize] << "\"];\n";
      ++real_index;
    }
  }

  // Names per (subgraph, matrix node) for edge endpoints.
  std::vector<std::vector<std::string>> names(composite.subgraphs.size());
  for (std::size_t s = 0; s < composite.subgraphs.size(); ++s) {
    const auto& g = composite.subgraphs[s];
    names[s].assign(static_cast<std::size_t>(g.n()), {});
    int real_index = 0;
    for (int node = 0; node < g.n(); ++node) {
      if (g.node_is_empty(node)) continue;
      names[s][static_cast<std::size_t>(node)] =
          CompositeGraph::node_name(static_cast<int>(s), real_index++);
    }
  }

  auto emit_edge = [&](const std::string& a_name, int a_type, const std::string& b_name,
                       int b_type, bool junction) {
    bool a_to_b = false;
    out << "  \"";
    if (arrow_between(cs, a_type, b_type, a_to_b)) {
      out << (a_to_b ? a_name : b_name) << "\" -- \"" << (a_to_b ? b_name : a_name)
          << "\" [dir=forward" << (junction ? ", style=dashed" : "") << "];\n";
    } else {
      out << a_name << "\" -- \"" << b_name << "\""
          << (junction ? " [style=dashed]" : "") << ";\n";
    }
  };

  for (std::size_t s = 0; s < composite.subgraphs.size(); ++s) {
    const auto& g = composite.subgraphs[s];
    for (int row = 1; row < g.n(); ++row) {
      for (int col = 0; col < row; ++col) {
        if (!g.edge(CellIndex{row, col})) continue;
        if (g.node_is_empty(row) || g.node_is_empty(col)) continue;
        emit_edge(names[s][static_cast<std::size_t>(row)], g.type_of(row),
                  names[s][static_cast<std::size_t>(col)], g.type_of(col), false);
      }
    }
  }
  for (const auto& [from, to] : composite.junctions) {
    const auto& fg = composite.subgraphs[static_cast<std::size_t>(from.subgraph)];
    const auto& tg = composite.subgraphs[static_cast<std::size_t>(to.subgraph)];
    emit_edge(names[static_cast<std::size_t>(from.subgraph)][static_cast<std::size_t>(from.node)],
              fg.type_of(from.node),
              names[static_cast<std::size_t>(to.subgraph)][static_cast<std::size_t>(to.node)],
              tg.type_of(to.node), true);
  }
  out << "}\n";
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << contents;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace graphgen
