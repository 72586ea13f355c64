#include "graphgen/constraints.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace graphgen {

namespace {

using ordered_json = nlohmann::ordered_json;

// nlohmann keeps the last value for repeated keys; a parser callback is the
// supported way to see every key as it streams by.
void check_duplicate_keys(const std::string& text) {
  std::vector<std::set<std::string>> stack;
  std::string duplicate;
  nlohmann::json::parser_callback_t cb = [&](int /*depth*/, nlohmann::json::parse_event_t event,
                                             nlohmann::json& parsed) {
    switch (event) {
      case nlohmann::json::parse_event_t::object_start:
        stack.emplace_back();
        break;
      case nlohmann::json::parse_event_t::object_end:
        stack.pop_back();
        break;
      case nlohmann::json::parse_event_t::key: {
        const auto key = parsed.get<std::string>();
        if (!stack.back().insert(key).second && duplicate.empty()) duplicate = key;
        break;
      }
      default:
        break;
    }
    return true;
  };
  [[maybe_unused]] const auto replay = nlohmann::json::parse(text, cb);
  if (!duplicate.empty()) {
    throw ParseError("duplicate key '" + duplicate + "' in constraint file");
  }
}

}  // namespace

ConstraintSet ConstraintSet::parse(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("constraint file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("constraint file must be a JSON object");
  check_duplicate_keys(text);

  std::vector<std::string> names;
  for (const auto& [key, value] : doc.items()) {
    if (key.starts_with("_")) {
      if (key != "_aliases" && key != "_arrows") {
        throw ParseError("unknown directive '" + key + "' (underscore keys are reserved)");
      }
      continue;
    }
    if (!value.is_array()) {
      throw ParseError("requirement list for '" + key + "' must be an array");
    }
    names.push_back(key);
  }
  if (names.empty()) throw ParseError("constraint file declares no node types");
  if (names.size() > 63) throw ParseError("at most 63 node types are supported");

  ConstraintSet cs;
  cs.source_text_ = text;
  cs.alphabet_ = TypeAlphabet::from_names(names);
  const int k = cs.alphabet_.num_node_types();
  cs.requires_.assign(static_cast<std::size_t>(k + 1), {});

  for (const auto& [key, value] : doc.items()) {
    if (key.starts_with("_")) continue;
    const int code = *cs.alphabet_.find(key);
    for (const auto& entry : value) {
      if (!entry.is_string()) {
        throw ParseError("requirement list for '" + key + "' must contain type names");
      }
      const auto required = entry.get<std::string>();
      const auto required_code = cs.alphabet_.find(required);
      if (!required_code.has_value() || cs.alphabet_.is_empty(*required_code)) {
        throw ParseError("undeclared type '" + required + "' required by '" + key + "'");
      }
      cs.requires_[static_cast<std::size_t>(code)].push_back(*required_code);
    }
  }

  if (auto it = doc.find("_aliases"); it != doc.end()) {
    if (!it->is_object()) throw ParseError("_aliases must be an object");
    for (const auto& [alias, symbol] : it->items()) {
      const auto code = symbol.is_string() ? cs.alphabet_.find(symbol.get<std::string>())
                                           : std::nullopt;
      if (!code.has_value()) {
        throw ParseError("alias '" + alias + "' points at an undeclared type");
      }
      cs.alphabet_.add_alias(alias, *code);
    }
  }

  // Allowance is the symmetric closure of the requirement lists; the padding
  // type accepts no edges at all.
  const int full = cs.alphabet_.size();
  cs.allowed_.assign(static_cast<std::size_t>(full) * static_cast<std::size_t>(full), 0);
  for (int a = 0; a < k; ++a) {
    for (const int b : cs.requires_[static_cast<std::size_t>(a)]) {
      cs.allowed_[static_cast<std::size_t>(a) * static_cast<std::size_t>(full) +
                  static_cast<std::size_t>(b)] = 1;
      cs.allowed_[static_cast<std::size_t>(b) * static_cast<std::size_t>(full) +
                  static_cast<std::size_t>(a)] = 1;
    }
  }
  for (int a = 0; a < k; ++a) {
    for (const int b : cs.requires_[static_cast<std::size_t>(a)]) {
      const auto& back = cs.requires_[static_cast<std::size_t>(b)];
      if (std::find(back.begin(), back.end(), a) == back.end()) {
        cs.warnings_.push_back("asymmetric input: '" + cs.alphabet_.type(a).name + "' lists '" +
                               cs.alphabet_.type(b).name +
                               "' but not the other way around; allowance is closed symmetrically");
      }
    }
  }

  cs.requires_mask_.assign(static_cast<std::size_t>(full), 0);
  for (int a = 0; a <= k; ++a) {
    for (const int b : cs.requires_[static_cast<std::size_t>(a)]) {
      cs.requires_mask_[static_cast<std::size_t>(a)] |= std::uint64_t{1} << b;
    }
  }

  if (auto it = doc.find("_arrows"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("_arrows must be an array of \"From>To\" strings");
    for (const auto& entry : *it) {
      if (!entry.is_string()) throw ParseError("_arrows entries must be strings");
      const auto s = entry.get<std::string>();
      const auto gt = s.find('>');
      if (gt == std::string::npos) throw ParseError("arrow '" + s + "' must look like From>To");
      const auto from = cs.alphabet_.find(s.substr(0, gt));
      const auto to = cs.alphabet_.find(s.substr(gt + 1));
      if (!from || !to) throw ParseError("arrow '" + s + "' references an undeclared type");
      cs.arrows_.emplace_back(*from, *to);
    }
  }

  return cs;
}

ConstraintSet load_constraint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open constraint file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ConstraintSet::parse(buf.str());
}

int ConstraintSet::num_rules() const {
  int total = 0;
  for (const auto& list : requires_) total += static_cast<int>(list.size());
  return total;
}

int min_feasible_count(const ConstraintSet& cs, int code) {
  return (cs.requires_mask(code) & (std::uint64_t{1} << code)) != 0 ? 2 : 1;
}

void check_config_feasible(const ConstraintSet& cs, const GraphConfig& config, int max_size) {
  check_config(config, max_size, cs.alphabet());
  for (int code = 0; code < cs.num_node_types(); ++code) {
    const int minimum = min_feasible_count(cs, code);
    if (config.count_for(code) < minimum) {
      throw ConfigError("type '" + cs.alphabet().type(code).name + "' requires its own kind, so " +
                        std::to_string(minimum) + " nodes are needed (configuration has " +
                        std::to_string(config.count_for(code)) + ")");
    }
  }
}

namespace {

// Shared kernel: (missing requirement count, disallowed incident edge count).
inline std::pair<int, int> node_tally(const ConstraintSet& cs, const GraphState& g, int node) {
  const int type = g.type_of(node);
  std::uint64_t neighbor_mask = 0;
  int disallowed = 0;
  for (int other = 0; other < g.n(); ++other) {
    if (other == node || !g.edge(node, other)) continue;
    const int other_type = g.type_of(other);
    neighbor_mask |= std::uint64_t{1} << other_type;
    if (!cs.edge_allowed(type, other_type)) ++disallowed;
  }
  const int missing = std::popcount(cs.requires_mask(type) & ~neighbor_mask);
  return {missing, disallowed};
}

}  // namespace

int node_violations(const ConstraintSet& cs, const GraphState& g, int node) {
  if (node < 0 || node >= g.n()) {
    throw DomainError("node index " + std::to_string(node) + " outside graph of size " +
                      std::to_string(g.n()));
  }
  const auto [missing, disallowed] = node_tally(cs, g, node);
  return missing + disallowed;
}

ViolationReport total_violations(const ConstraintSet& cs, const GraphState& g) {
  ViolationReport report;
  report.per_node.resize(static_cast<std::size_t>(g.n()), 0);
  for (int node = 0; node < g.n(); ++node) {
    const auto [missing, disallowed] = node_tally(cs, g, node);
    report.per_node[static_cast<std::size_t>(node)] = missing + disallowed;
    report.missing_required += missing;
    report.disallowed_edges += disallowed;
  }
  report.total = report.missing_required + report.disallowed_edges;
  return report;
}

bool is_valid(const ConstraintSet& cs, const GraphState& g) {
  // Early-out; this is the hot path for the search baselines.
  for (int node = 0; node < g.n(); ++node) {
    const auto [missing, disallowed] = node_tally(cs, g, node);
    if (missing + disallowed > 0) return false;
  }
  return true;
}

}  // namespace graphgen
