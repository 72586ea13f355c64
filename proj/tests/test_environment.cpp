#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "graphgen/environment.hpp"
#include "test_util.hpp"

using namespace graphgen;

namespace {

EnvSpec spec_for(const ConstraintSet& cs, int max_size) {
  return make_env_spec(cs, "inline", max_size);
}

}  // namespace

TEST_CASE("configuration sampling") {
  const auto s1 = testutil::set1();
  const auto s2 = testutil::set2();

  SUBCASE("three types at their minimum size leave one configuration") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto config = sample_configuration(s1, 3, seed);
      CHECK(config.size == 3);
      CHECK(config.counts == std::vector<int>{1, 1, 1});
    }
  }

  SUBCASE("two types up to size four: uniform over six configurations") {
    CHECK(count_configurations(s2, 4) == 6);
    Rng rng(1234);
    std::map<std::pair<int, std::vector<int>>, int> histogram;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
      const auto config = sample_configuration(s2, 4, rng);
      ++histogram[{config.size, config.counts}];
    }
    CHECK(histogram.size() == 6);
    // 3 sigma of a binomial(10000, 1/6) around the mean.
    const double mean = draws / 6.0;
    const double tolerance = 3.0 * std::sqrt(draws * (1.0 / 6.0) * (5.0 / 6.0));
    for (const auto& [key, count] : histogram) {
      CHECK(std::abs(count - mean) < tolerance);
    }
  }

  SUBCASE("stars-and-bars count for three types up to size six") {
    CHECK(count_configurations(s1, 6) == 20);  // 1 + 3 + 6 + 10
    Rng rng(99);
    std::set<std::pair<int, std::vector<int>>> seen;
    for (int i = 0; i < 20000; ++i) {
      const auto config = sample_configuration(s1, 6, rng);
      seen.insert({config.size, config.counts});
    }
    CHECK(seen.size() == 20);
  }

  SUBCASE("self-requiring types are always sampled at two or more") {
    // A single node of a self-requiring type can never satisfy itself, so
    // those configurations are outside the feasible space.
    const auto s3 = testutil::set3();  // V requires V
    const auto s4 = testutil::set4();  // U requires U
    const int v3 = *s3.alphabet().find("V");
    const int u4 = *s4.alphabet().find("U");
    Rng rng(8);
    for (int i = 0; i < 500; ++i) {
      CHECK(sample_configuration(s3, 6, rng).count_for(v3) >= 2);
      CHECK(sample_configuration(s4, 6, rng).count_for(u4) >= 2);
      CHECK(sample_counts_for_size(s3, 5, rng).count_for(v3) >= 2);
    }
    CHECK_THROWS_AS(check_config_feasible(s3, GraphConfig{2, {1, 1}}, 4), ConfigError);
    CHECK_NOTHROW(check_config_feasible(s3, GraphConfig{3, {1, 2}}, 4));
  }

  SUBCASE("max size below the type count is rejected") {
    CHECK_THROWS_AS(sample_configuration(s1, 2, 0u), ConfigError);
  }

  SUBCASE("fixed-size sampling always sums to the size") {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
      const auto config = sample_counts_for_size(s1, 7, rng);
      CHECK(config.size == 7);
      int total = 0;
      for (const int c : config.counts) {
        CHECK(c >= 1);
        total += c;
      }
      CHECK(total == 7);
    }
  }
}

TEST_CASE("reset produces the requested diagonal and is seed-deterministic") {
  const auto s1 = testutil::set1();

  SUBCASE("fixed configuration") {
    Environment env(spec_for(s1, 6), Representation::graph_wide, 11u);
    env.reset(GraphConfig{5, {2, 2, 1}});
    std::vector<int> counts(3, 0);
    for (int node = 0; node < 5; ++node) {
      ++counts[static_cast<std::size_t>(env.state().type_of(node))];
    }
    CHECK(counts == std::vector<int>{2, 2, 1});
    CHECK(env.state().node_is_empty(5));
  }

  SUBCASE("training mode samples a configuration") {
    Environment env(spec_for(s1, 6), Representation::graph_wide, 11u);
    env.reset();
    CHECK(env.config().size >= 3);
    CHECK(env.config().size <= 6);
  }

  SUBCASE("same seed, same initial observation") {
    Environment a(spec_for(s1, 6), Representation::graph_wide, 3u);
    Environment b(spec_for(s1, 6), Representation::graph_wide, 3u);
    CHECK(a.reset() == b.reset());
    CHECK(a.state() == b.state());
  }

  SUBCASE("oversized configurations are rejected") {
    Environment env(spec_for(s1, 4), Representation::graph_wide, 1u);
    CHECK_THROWS_AS(env.reset(GraphConfig{5, {2, 2, 1}}), ConfigError);
  }
}

TEST_CASE("reward matches the violation delta plus the validity bonus") {
  const auto s1 = testutil::set1();
  const auto s2 = testutil::set2();
  const double alpha = 5.0;

  SUBCASE("fixing both requirements of a pair is +2 plus the bonus") {
    const auto before = testutil::make_state(s2, {"U", "V"}, {});
    const auto after = toggle_edge(before, {1, 0});
    CHECK(compute_reward(before, after, s2, alpha) == doctest::Approx(2.0 + alpha));
  }

  SUBCASE("a do-nothing transition on an invalid graph is zero") {
    const auto state = testutil::make_state(s2, {"U", "V"}, {});
    CHECK(compute_reward(state, state, s2, alpha) == doctest::Approx(0.0));
  }

  SUBCASE("spoiling a valid graph with a forbidden edge is -2 and no bonus") {
    const auto valid_state = testutil::example_matrix(s1);
    const auto spoiled = toggle_edge(valid_state, {2, 0});  // U-W is not allowed
    CHECK(compute_reward(valid_state, spoiled, s1, alpha) == doctest::Approx(-2.0));
  }
}

TEST_CASE("observation encoding") {
  const auto s1 = testutil::set1();
  const auto s2 = testutil::set2();

  SUBCASE("wide encoding has exactly one hot entry per cell") {
    const auto state = testutil::make_state(s2, {"U", "V"}, {{1, 0}});
    const auto obs = encode_observation(state, Representation::graph_wide, s2.alphabet());
    CHECK(obs.rows == 2);
    CHECK(obs.cols == 2);
    CHECK(obs.depth == s2.alphabet().size() + 2);
    double total = 0.0;
    for (const double v : obs.data) total += v;
    CHECK(total == doctest::Approx(4.0));
    for (int cell = 0; cell < 4; ++cell) {
      double cell_sum = 0.0;
      for (int c = 0; c < obs.depth; ++c) {
        cell_sum += obs.data[static_cast<std::size_t>(cell * obs.depth + c)];
      }
      CHECK(cell_sum == doctest::Approx(1.0));
    }
  }

  SUBCASE("narrow encoding reads the two nodes of the selected cell") {
    const auto state = testutil::example_matrix(s1);
    const auto obs =
        encode_observation(state, Representation::graph_narrow, s1.alphabet(), CellIndex{2, 0});
    const int depth = s1.alphabet().size() + 2;
    CHECK(obs.rows == 2);
    CHECK(obs.cols == state.n() + 1);
    // First vector describes node 2 (type W): type entry, then its edges read
    // partner-first, so entry 0 is the cell under the cursor.
    const int w = *s1.alphabet().find("W");
    CHECK(obs.data[static_cast<std::size_t>(0 * depth + 2 + w)] == 1.0);
    const auto edge_entry = [&](int vec, int j) {
      const int cell = vec * (state.n() + 1) + 1 + j;
      return obs.data[static_cast<std::size_t>(cell * depth + 1)];
    };
    CHECK(edge_entry(0, 0) == 0.0);  // e(2,0): the selected cell, currently off
    CHECK(edge_entry(0, 1) == 1.0);  // e(2,1): the V-W edge
    CHECK(edge_entry(0, 3) == 0.0);  // e(2,3)
    // Second vector describes node 0 (type U), rotated to start at node 2.
    const int u = *s1.alphabet().find("U");
    CHECK(obs.data[static_cast<std::size_t>((state.n() + 1) * depth + 2 + u)] == 1.0);
    CHECK(edge_entry(1, 0) == 0.0);  // e(0,2): the selected cell again
    CHECK(edge_entry(1, 4) == 1.0);  // e(0,1): the U-V edge, last in rotation
    // Both vectors agree on the selected cell's state.
    CHECK(edge_entry(0, 0) == edge_entry(1, 0));
  }

  SUBCASE("narrow needs a cursor, wide refuses one") {
    const auto state = testutil::example_matrix(s1);
    CHECK_THROWS_AS(encode_observation(state, Representation::graph_narrow, s1.alphabet()),
                    ContractError);
    CHECK_THROWS_AS(
        encode_observation(state, Representation::graph_wide, s1.alphabet(), CellIndex{1, 0}),
        ContractError);
  }

  SUBCASE("same-type nodes with identical connections are interchangeable") {
    const auto a = testutil::make_state(s1, {"U", "U", "V"}, {{2, 0}, {2, 1}});
    // Swapping the two U nodes maps the edge set onto itself.
    const auto b = testutil::make_state(s1, {"U", "U", "V"}, {{2, 1}, {2, 0}});
    CHECK(encode_observation(a, Representation::graph_wide, s1.alphabet()) ==
          encode_observation(b, Representation::graph_wide, s1.alphabet()));
  }
}

TEST_CASE("step semantics per representation") {
  const auto s1 = testutil::set1();
  const auto s2 = testutil::set2();

  SUBCASE("narrow: toggling a missing required edge pays off") {
    EnvSpec spec = spec_for(s2, 2);
    for (std::uint64_t seed = 0;; ++seed) {
      REQUIRE(seed < 200);
      Environment env(spec, Representation::graph_narrow, seed);
      env.reset(GraphConfig{2, {1, 1}});
      if (env.state().edge(CellIndex{1, 0})) continue;
      const auto outcome = env.step(1);
      CHECK(outcome.reward > 0.0);
      CHECK(outcome.info.valid);
      CHECK(outcome.done);
      break;
    }
  }

  SUBCASE("wide: the no-op flag leaves the state unchanged with zero reward") {
    Environment env(spec_for(s1, 5), Representation::graph_wide, 3u);
    env.reset(GraphConfig{5, {2, 2, 1}});
    if (is_valid(s1, env.state())) return;  // freak initialization; nothing to assert
    const auto before = env.state();
    const auto outcome = env.step(0);  // position 1, flag 0
    CHECK(env.state() == before);
    CHECK(outcome.reward == doctest::Approx(0.0));
    CHECK(!outcome.info.changed);
    CHECK(outcome.info.iterations == 1);
  }

  SUBCASE("pcgrl-wide: diagonal writes burn an iteration") {
    Environment env(spec_for(s1, 5), Representation::pcgrl_wide, 3u);
    env.reset(GraphConfig{5, {2, 2, 1}});
    if (is_valid(s1, env.state())) return;
    const auto before = env.state();
    const auto outcome = env.step((2 * 5 + 2) * 2 + 1);  // write 1 at diagonal cell (2,2)
    CHECK(env.state() == before);
    CHECK(outcome.reward == doctest::Approx(0.0));
    CHECK(outcome.info.iterations == 1);
    CHECK(!outcome.info.changed);
  }

  SUBCASE("pcgrl-wide: lower-triangle writes set the cell to the value") {
    Environment env(spec_for(s1, 5), Representation::pcgrl_wide, 3u);
    env.reset(GraphConfig{5, {2, 2, 1}});
    const auto outcome = env.step((1 * 5 + 0) * 2 + 1);  // write 1 at (1,0)
    CHECK(env.state().edge(CellIndex{1, 0}));
    if (!outcome.done) {
      const auto again = env.step((1 * 5 + 0) * 2 + 1);  // idempotent write
      CHECK(env.state().edge(CellIndex{1, 0}));
      CHECK(!again.info.changed);
    }
  }

  SUBCASE("out-of-range actions are domain errors") {
    Environment env(spec_for(s1, 5), Representation::graph_wide, 3u);
    env.reset(GraphConfig{5, {2, 2, 1}});
    CHECK_THROWS_AS(env.step(-1), DomainError);
    CHECK_THROWS_AS(env.step(env.action_space_size()), DomainError);
  }
}

TEST_CASE("episode termination") {
  const auto s1 = testutil::set1();

  SUBCASE("every representation terminates within max_iterations") {
    for (const auto repr :
         {Representation::graph_narrow, Representation::graph_wide, Representation::pcgrl_wide}) {
      Environment env(spec_for(s1, 5), repr, 17u);
      Rng rng(55);
      for (int episode = 0; episode < 30; ++episode) {
        env.reset();
        int steps = 0;
        while (!env.done()) {
          const int action = static_cast<int>(rng.uniform_int(0, env.action_space_size() - 1));
          env.step(action);
          ++steps;
          REQUIRE(steps <= env.spec().max_iterations);
        }
      }
    }
  }

  SUBCASE("narrow acts on each eligible cell exactly once per sweep") {
    Environment env(spec_for(s1, 6), Representation::graph_narrow, 23u);
    for (std::uint64_t seed = 23;; ++seed) {
      REQUIRE(seed < 200);
      Environment retry(spec_for(s1, 6), Representation::graph_narrow, seed);
      retry.reset(GraphConfig{4, {2, 1, 1}});
      if (is_valid(s1, retry.state())) continue;
      // Keep-only actions never change the state, so the episode must run the
      // full sweep of the 4-node block.
      int steps = 0;
      TerminationCause cause = TerminationCause::none;
      while (!retry.done()) {
        cause = retry.step(0).info.cause;
        ++steps;
      }
      CHECK(cause == TerminationCause::sweep_complete);
      CHECK(steps == num_cells(4));
      break;
    }
  }

  SUBCASE("done on valid includes the bonus") {
    const auto s2 = testutil::set2();
    EnvSpec spec = spec_for(s2, 2);
    for (std::uint64_t seed = 0;; ++seed) {
      REQUIRE(seed < 200);
      Environment env(spec, Representation::graph_wide, seed);
      env.reset(GraphConfig{2, {1, 1}});
      if (is_valid(s2, env.state())) continue;
      const auto outcome = env.step(1);  // toggle position 1
      CHECK(outcome.done);
      CHECK(outcome.info.valid);
      CHECK(outcome.info.cause == TerminationCause::valid);
      CHECK(outcome.reward == doctest::Approx(2.0 + spec.alpha));
      break;
    }
  }

  SUBCASE("identical seeds and actions replay identically") {
    EnvSpec spec = spec_for(s1, 5);
    Environment a(spec, Representation::graph_wide, 77u);
    Environment b(spec, Representation::graph_wide, 77u);
    a.reset();
    b.reset();
    Rng rng(3);
    for (int t = 0; t < 60; ++t) {
      if (a.done()) {
        a.reset();
        b.reset();
      }
      const int action = static_cast<int>(rng.uniform_int(0, a.action_space_size() - 1));
      const auto oa = a.step(action);
      const auto ob = b.step(action);
      CHECK(oa.reward == ob.reward);
      CHECK(oa.done == ob.done);
      CHECK(oa.observation == ob.observation);
      CHECK(a.state() == b.state());
    }
  }
}

TEST_CASE("reward five-case law over an exhaustive small sweep") {
  // Every single-toggle transition on every diagonal over {U,V,W,padding} at
  // sizes 2..4, cross-checked against the independent oracle recount.
  const auto s1 = testutil::set1();
  const auto rules = testutil::oracle_parse(testutil::kSet1);
  const std::vector<std::string> symbols = {"U", "V", "W", ""};

  std::set<std::string> cases_seen;
  for (int n = 2; n <= 4; ++n) {
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    while (true) {
      std::vector<std::string> types;
      for (const int d : digits) types.push_back(symbols[static_cast<std::size_t>(d)]);
      const int cells = num_cells(n);
      for (unsigned mask = 0; mask < (1u << cells); ++mask) {
        const auto edges = testutil::edge_subset(n, mask);
        const auto state = testutil::make_state(s1, types, edges);
        const int before = testutil::oracle_total_violations(rules, types, edges);
        for (int a = 1; a <= cells; ++a) {
          const auto cell = action_to_cell(a, n);
          const auto next = toggle_edge(state, cell);
          auto next_edges = edges;
          const auto rc = std::make_pair(cell.row, cell.col);
          const auto it = std::find(next_edges.begin(), next_edges.end(), rc);
          const bool added = it == next_edges.end();
          if (added) {
            next_edges.push_back(rc);
          } else {
            next_edges.erase(it);
          }
          const int after = testutil::oracle_total_violations(rules, types, next_edges);
          const double reward = compute_reward(state, next, s1, 5.0);
          const double v = reward - (after == 0 ? 5.0 : 0.0);
          CHECK(v == doctest::Approx(before - after));
          if (v > 0) {
            cases_seen.insert(added ? "created-missing" : "removed-incorrect");
          } else if (v < 0) {
            cases_seen.insert(added ? "created-incorrect" : "removed-needed");
          } else {
            cases_seen.insert("no-effect");
          }
        }
      }
      std::size_t pos = 0;
      while (pos < digits.size() && ++digits[pos] == 4) {
        digits[pos] = 0;
        ++pos;
      }
      if (pos == digits.size()) break;
    }
  }
  CHECK(cases_seen.size() == 5);
}
