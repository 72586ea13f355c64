#include <doctest.h>

#include "graphgen/constraints.hpp"
#include "test_util.hpp"

using namespace graphgen;

TEST_CASE("parsing the shipped rule sets") {
  const auto s1 = testutil::set1();
  CHECK(s1.num_node_types() == 3);
  CHECK(s1.num_rules() == 4);
  CHECK(s1.requires_for(*s1.alphabet().find("V")).size() == 2);

  const auto s2 = testutil::set2();
  CHECK(s2.num_node_types() == 2);
  CHECK(s2.num_rules() == 2);

  CHECK(testutil::set3().num_rules() == 3);
  CHECK(testutil::set4().num_rules() == 5);
  CHECK(testutil::set5().num_rules() == 6);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(ConstraintSet::parse(R"({"U":["X"]})"), ParseError);
  CHECK_THROWS_WITH_AS(ConstraintSet::parse(R"({"U":["X"]})"),
                       "undeclared type 'X' required by 'U'", ParseError);
  CHECK_THROWS_AS(ConstraintSet::parse("{}"), ParseError);
  CHECK_THROWS_AS(ConstraintSet::parse(R"({"U":["V"],"U":["V"],"V":["U"]})"), ParseError);
  CHECK_THROWS_AS(ConstraintSet::parse("[1,2]"), ParseError);
  CHECK_THROWS_AS(ConstraintSet::parse("not json"), ParseError);
  CHECK_THROWS_AS(ConstraintSet::parse(R"({"_bogus":{},"U":["U"]})"), ParseError);
}

TEST_CASE("aliases resolve to their symbols") {
  const auto cs = ConstraintSet::parse(
      R"({"U":["V"],"V":["U","W"],"W":["V"],"_aliases":{"Source":"U","Converter":"V","Pool":"W"}})");
  CHECK(cs.alphabet().find("Source") == cs.alphabet().find("U"));
  CHECK(cs.alphabet().find("Pool") == cs.alphabet().find("W"));
  CHECK(cs.alphabet().display_name(*cs.alphabet().find("U")) == "Source");
  CHECK_THROWS_AS(
      ConstraintSet::parse(R"({"U":["U"],"_aliases":{"Ghost":"Z"}})"), ParseError);
}

TEST_CASE("edge allowance is the symmetric closure") {
  const auto s1 = testutil::set1();
  const int u = *s1.alphabet().find("U");
  const int v = *s1.alphabet().find("V");
  const int w = *s1.alphabet().find("W");
  const int empty = s1.empty_code();

  CHECK(s1.edge_allowed(u, v));
  CHECK(s1.edge_allowed(v, u));
  CHECK(!s1.edge_allowed(u, w));
  CHECK(!s1.edge_allowed(w, u));
  CHECK(s1.edge_allowed(v, w));
  CHECK(!s1.edge_allowed(u, empty));
  CHECK(!s1.edge_allowed(empty, empty));

  // Symmetry over the whole alphabet.
  for (int a = 0; a < s1.alphabet().size(); ++a) {
    for (int b = 0; b < s1.alphabet().size(); ++b) {
      CHECK(s1.edge_allowed(a, b) == s1.edge_allowed(b, a));
    }
  }

  CHECK(testutil::set1().warnings().empty());
  const auto asymmetric = ConstraintSet::parse(R"({"U":["V"],"V":["U"],"W":["V"]})");
  CHECK(!asymmetric.warnings().empty());
  CHECK(asymmetric.edge_allowed(*asymmetric.alphabet().find("V"),
                                *asymmetric.alphabet().find("W")));
}

TEST_CASE("node violations on known graphs") {
  const auto s1 = testutil::set1();

  SUBCASE("the worked example graph is clean") {
    const auto state = testutil::example_matrix(s1);
    CHECK(node_violations(s1, state, 0) == 0);
    for (int node = 0; node < state.n(); ++node) {
      CHECK(node_violations(s1, state, node) == 0);
    }
  }

  SUBCASE("edgeless diagonal counts unmet requirements") {
    const auto state = testutil::make_state(s1, {"U", "V", "W", "U", ""}, {});
    CHECK(node_violations(s1, state, 1) == 2);  // V misses both U and W
    const auto report = total_violations(s1, state);
    CHECK(report.total == 5);
    CHECK(report.per_node == std::vector<int>{1, 2, 1, 1, 0});
    CHECK(report.missing_required == 5);
    CHECK(report.disallowed_edges == 0);
  }

  SUBCASE("edges into padding are violations at both ends") {
    const auto state = testutil::make_state(s1, {"U", "V", ""}, {{2, 0}});
    CHECK(node_violations(s1, state, 2) == 1);
    CHECK(node_violations(s1, state, 0) == 2);  // missing V plus the padding edge
  }

  SUBCASE("a same-type edge under set 2 counts at both ends") {
    const auto s2 = testutil::set2();
    const auto state = testutil::make_state(s2, {"U", "U"}, {{1, 0}});
    const auto report = total_violations(s2, state);
    CHECK(report.total == 4);  // each U misses V, each endpoint of U-U is bad
    CHECK(report.missing_required == 2);
    CHECK(report.disallowed_edges == 2);
  }
}

TEST_CASE("report fields always reconcile") {
  const auto s1 = testutil::set1();
  graphgen::Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const GraphConfig config{5, {2, 2, 1}};
    auto state = init_random(config, 6, 0.5, s1.alphabet(), rng);
    const auto report = total_violations(s1, state);
    CHECK(report.total == report.missing_required + report.disallowed_edges);
    int per_node_sum = 0;
    for (const int v : report.per_node) per_node_sum += v;
    CHECK(per_node_sum == report.total);
    CHECK(is_valid(s1, state) == (report.total == 0));
  }
}

TEST_CASE("adding an allowed edge never makes things worse") {
  const auto s1 = testutil::set1();
  graphgen::Rng rng(7);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const GraphConfig config{5, {2, 2, 1}};
    auto state = init_random(config, 5, 0.4, s1.alphabet(), rng);
    const auto before = total_violations(s1, state);
    // Pick a currently-absent allowed pair, if any.
    for (int row = 1; row < state.n(); ++row) {
      for (int col = 0; col < row; ++col) {
        const CellIndex cell{row, col};
        if (state.edge(cell)) continue;
        if (!s1.edge_allowed(state.type_of(row), state.type_of(col))) continue;
        const auto after = total_violations(s1, toggle_edge(state, cell));
        CHECK(after.missing_required <= before.missing_required);
        CHECK(after.disallowed_edges <= before.disallowed_edges);
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("exhaustive agreement with the independent oracle at size 4") {
  const auto rules2 = testutil::oracle_parse(testutil::kSet2);
  const auto s2 = testutil::set2();

  const std::vector<std::string> symbols = {"U", "V"};
  int graphs = 0;
  for (int d0 = 0; d0 < 2; ++d0) {
    for (int d1 = 0; d1 < 2; ++d1) {
      for (int d2 = 0; d2 < 2; ++d2) {
        for (int d3 = 0; d3 < 2; ++d3) {
          const std::vector<std::string> types = {symbols[d0], symbols[d1], symbols[d2],
                                                  symbols[d3]};
          for (unsigned mask = 0; mask < 64; ++mask) {
            const auto edges = testutil::edge_subset(4, mask);
            const auto state = testutil::make_state(s2, types, edges);
            CHECK(is_valid(s2, state) == testutil::oracle_is_valid(rules2, types, edges));
            CHECK(total_violations(s2, state).total ==
                  testutil::oracle_total_violations(rules2, types, edges));
            ++graphs;
          }
        }
      }
    }
  }
  CHECK(graphs == 16 * 64);
}
