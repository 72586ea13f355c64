#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "graphgen/constraints.hpp"
#include "graphgen/graph.hpp"

namespace testutil {

// The five shipped rule sets, inline so tests do not depend on data paths.
inline const char* kSet1 = R"({"U":["V"],"V":["U","W"],"W":["V"]})";
inline const char* kSet2 = R"({"U":["V"],"V":["U"]})";
inline const char* kSet3 = R"({"U":["V"],"V":["U","V"]})";
inline const char* kSet4 = R"({"U":["U"],"V":["U","V","W"],"W":["V"]})";
inline const char* kSet5 = R"({"U":["V","W"],"V":["U","W"],"W":["U","V"]})";

inline graphgen::ConstraintSet set1() { return graphgen::ConstraintSet::parse(kSet1); }
inline graphgen::ConstraintSet set2() { return graphgen::ConstraintSet::parse(kSet2); }
inline graphgen::ConstraintSet set3() { return graphgen::ConstraintSet::parse(kSet3); }
inline graphgen::ConstraintSet set4() { return graphgen::ConstraintSet::parse(kSet4); }
inline graphgen::ConstraintSet set5() { return graphgen::ConstraintSet::parse(kSet5); }

// Builds a state from type names ("" marks padding) and an explicit edge list.
inline graphgen::GraphState make_state(const graphgen::ConstraintSet& cs,
                                       const std::vector<std::string>& type_names,
                                       const std::vector<std::pair<int, int>>& edges) {
  const auto& alphabet = cs.alphabet();
  std::vector<int> diagonal;
  for (const auto& name : type_names) {
    diagonal.push_back(name.empty() ? alphabet.empty_code() : *alphabet.find(name));
  }
  graphgen::GraphState state(diagonal, alphabet.empty_code());
  for (const auto& [a, b] : edges) {
    state.set_edge(graphgen::CellIndex{std::max(a, b), std::min(a, b)}, true);
  }
  return state;
}

// The worked example matrix: diagonal U,V,W,U,padding with the three edges
// (1,0), (2,1), (3,1).
inline graphgen::GraphState example_matrix(const graphgen::ConstraintSet& cs) {
  return make_state(cs, {"U", "V", "W", "U", ""}, {{1, 0}, {2, 1}, {3, 1}});
}

// ---------------------------------------------------------------------------
// Independent validity oracle. Deliberately shares no code with the library:
// its own JSON parse, name-keyed rules, adjacency lists instead of a matrix.
// ---------------------------------------------------------------------------

struct OracleRules {
  std::map<std::string, std::vector<std::string>> requires_by_type;
};

inline OracleRules oracle_parse(const std::string& json_text) {
  OracleRules rules;
  const auto doc = nlohmann::json::parse(json_text);
  for (const auto& [key, value] : doc.items()) {
    if (!key.empty() && key[0] == '_') continue;
    rules.requires_by_type[key] = value.get<std::vector<std::string>>();
  }
  return rules;
}

inline bool oracle_allowed(const OracleRules& rules, const std::string& a, const std::string& b) {
  if (a.empty() || b.empty()) return false;  // padding refuses all edges
  const auto scan = [&](const std::string& from, const std::string& to) {
    const auto it = rules.requires_by_type.find(from);
    if (it == rules.requires_by_type.end()) return false;
    for (const auto& entry : it->second) {
      if (entry == to) return true;
    }
    return false;
  };
  return scan(a, b) || scan(b, a);
}

// Total violations over adjacency lists: per node, unmet requirement types
// plus incident edges with a forbidden type pair (counted at both ends).
inline int oracle_total_violations(const OracleRules& rules,
                                   const std::vector<std::string>& types,
                                   const std::vector<std::pair<int, int>>& edges) {
  const int n = static_cast<int>(types.size());
  std::vector<std::vector<int>> adjacency(types.size());
  for (const auto& [a, b] : edges) {
    adjacency[static_cast<std::size_t>(a)].push_back(b);
    adjacency[static_cast<std::size_t>(b)].push_back(a);
  }
  int total = 0;
  for (int node = 0; node < n; ++node) {
    const auto& type = types[static_cast<std::size_t>(node)];
    if (!type.empty()) {
      const auto it = rules.requires_by_type.find(type);
      if (it != rules.requires_by_type.end()) {
        for (const auto& required : it->second) {
          bool found = false;
          for (const int neighbor : adjacency[static_cast<std::size_t>(node)]) {
            if (types[static_cast<std::size_t>(neighbor)] == required) {
              found = true;
              break;
            }
          }
          if (!found) ++total;
        }
      }
    }
    for (const int neighbor : adjacency[static_cast<std::size_t>(node)]) {
      if (!oracle_allowed(rules, type, types[static_cast<std::size_t>(neighbor)])) ++total;
    }
  }
  return total;
}

inline bool oracle_is_valid(const OracleRules& rules, const std::vector<std::string>& types,
                            const std::vector<std::pair<int, int>>& edges) {
  return oracle_total_violations(rules, types, edges) == 0;
}

// Edge list of the i-th subset over the lower-triangle cells of an n-node
// graph, for exhaustive sweeps.
inline std::vector<std::pair<int, int>> edge_subset(int n, unsigned mask) {
  std::vector<std::pair<int, int>> edges;
  int bit = 0;
  for (int row = 1; row < n; ++row) {
    for (int col = 0; col < row; ++col) {
      if (mask & (1u << bit)) edges.emplace_back(row, col);
      ++bit;
    }
  }
  return edges;
}

}  // namespace testutil
