#include <doctest.h>

#include <filesystem>

#include "graphgen/bench.hpp"
#include "graphgen/serialize.hpp"
#include "test_util.hpp"

using namespace graphgen;

namespace {

PolicyModel untrained_model(const ConstraintSet& cs, int max_size) {
  TrainSpec train;
  train.total_steps = 128;
  train.rollout_length = 128;
  train.minibatch_size = 32;
  train.seed = 1u;
  return PolicyModel::create(make_env_spec(cs, "inline", max_size), Representation::graph_wide,
                             train);
}

}  // namespace

TEST_CASE("validity protocol runs the exact sample count") {
  const auto s5 = testutil::set5();  // easy enough that even noise sometimes wins
  const auto model = untrained_model(s5, 4);
  const GreedyGenerator generator(model);
  const auto stats = validity_rate(generator, 40, 9u);
  CHECK(stats.samples == 40);
  CHECK(stats.rate >= 0.0);
  CHECK(stats.rate <= 1.0);
  CHECK(stats.mean_iterations > 0.0);
  CHECK(stats.mean_iterations <= model.env_spec.max_iterations);

  const auto again = validity_rate(generator, 40, 9u);
  CHECK(again.rate == stats.rate);
  CHECK(again.mean_iterations == stats.mean_iterations);
}

TEST_CASE("time_to_valid baseline rows") {
  const auto s5 = testutil::set5();
  BenchOptions options;

  SUBCASE("random search on an easy set") {
    BenchTask task;
    task.method = BenchMethod::random_search;
    task.set_id = "set5";
    task.size = 5;
    task.runs = 20;
    task.seed_base = 7u;
    const auto row = time_to_valid(task, s5, nullptr, options);
    CHECK(row.runs == 20);
    CHECK(row.failures == 0);
    CHECK(row.validity_rate == doctest::Approx(1.0));
    CHECK(row.median_ms >= 0.0);
    CHECK(row.p25_ms <= row.median_ms);
    CHECK(row.median_ms <= row.p75_ms);
    CHECK(row.mean_work >= 1.0);
  }

  SUBCASE("evolutionary search on an easy set") {
    BenchTask task;
    task.method = BenchMethod::evolutionary;
    task.set_id = "set5";
    task.size = 5;
    task.runs = 20;
    task.seed_base = 7u;
    const auto row = time_to_valid(task, s5, nullptr, options);
    CHECK(row.failures == 0);
    CHECK(row.mean_work >= 1.0);
  }

  SUBCASE("trained-model tasks require a generator") {
    BenchTask task;
    task.method = BenchMethod::trained_model;
    task.set_id = "set5";
    task.size = 4;
    task.runs = 2;
    CHECK_THROWS_AS(time_to_valid(task, s5, nullptr, options), ConfigError);
  }

  SUBCASE("model rows count failures instead of dropping them") {
    const auto model = untrained_model(s5, 4);
    const GreedyGenerator generator(model);
    BenchTask task;
    task.method = BenchMethod::trained_model;
    task.set_id = "set5";
    task.size = 4;
    task.runs = 10;
    task.seed_base = 3u;
    BenchOptions tight = options;
    tight.model_episode_retries = 1;  // an untrained policy will miss often
    const auto row = time_to_valid(task, s5, &generator, tight);
    CHECK(row.runs == 10);
    CHECK(row.failures + static_cast<int>(row.validity_rate * 10 + 0.5) == 10);
  }
}

TEST_CASE("report emission") {
  // A synthetic 5 sets x 3 sizes x 3 methods sweep.
  std::vector<BenchRow> rows;
  for (int set = 1; set <= 5; ++set) {
    for (int size = 5; size <= 7; ++size) {
      for (const auto* method : {"trained-model", "ea", "random-search"}) {
        BenchRow row;
        row.set_id = "set" + std::to_string(set);
        row.size = size;
        row.method = method;
        row.runs = 100;
        row.validity_rate = 1.0;
        row.mean_work = 10.0 * set;
        row.median_ms = size * 1.5;
        row.p25_ms = size * 1.0;
        row.p75_ms = size * 2.0;
        row.failures = 0;
        rows.push_back(row);
      }
    }
  }

  SUBCASE("CSV round-trips") {
    const auto csv = bench_rows_to_csv(rows);
    const auto parsed = bench_rows_from_csv(csv);
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(parsed[i].set_id == rows[i].set_id);
      CHECK(parsed[i].size == rows[i].size);
      CHECK(parsed[i].method == rows[i].method);
      CHECK(parsed[i].median_ms == doctest::Approx(rows[i].median_ms));
      CHECK(parsed[i].failures == rows[i].failures);
    }
  }

  SUBCASE("markdown mirrors the sets-by-methods layout") {
    const auto md = bench_rows_to_markdown(rows);
    // Header plus separator plus 15 body rows.
    int lines = 0;
    for (const char c : md) {
      if (c == '\n') ++lines;
    }
    CHECK(lines == 17);
    CHECK(md.find("| set2 | 6 |") != std::string::npos);
    CHECK(md.find("trained-model") != std::string::npos);
  }

  SUBCASE("writes both files into the output directory") {
    const auto dir = std::filesystem::temp_directory_path() / "graphgen_bench_test";
    std::filesystem::remove_all(dir);
    const auto [csv_path, md_path] = emit_report(rows, dir.string());
    CHECK(std::filesystem::exists(csv_path));
    CHECK(std::filesystem::exists(md_path));
    const auto reparsed = bench_rows_from_csv(read_text_file(csv_path));
    CHECK(reparsed.size() == rows.size());
    std::filesystem::remove_all(dir);
  }

  SUBCASE("empty input is an error and writes nothing") {
    const auto dir = std::filesystem::temp_directory_path() / "graphgen_bench_empty";
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(emit_report({}, dir.string()), ConfigError);
    CHECK(!std::filesystem::exists(dir / "bench.csv"));
    std::filesystem::remove_all(dir);
  }
}
