#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphgen/baselines.hpp"
#include "graphgen/learner.hpp"

namespace graphgen {

enum class BenchMethod { trained_model, evolutionary, random_search };

std::string bench_method_name(BenchMethod method);
BenchMethod bench_method_from_name(const std::string& name);

/// One benchmark cell: a method on one constraint set at one graph size.
struct BenchTask {
  BenchMethod method = BenchMethod::random_search;
  std::string set_id;
  int size = 0;
  int runs = 100;
  std::uint64_t seed_base = 0;
};

/// One report row. Timing quartiles cover successful runs only; failures are
/// counted, never silently dropped. mean_work is episode iterations for the
/// trained model and fitness evaluations for the search baselines.
struct BenchRow {
  std::string set_id;
  int size = 0;
  std::string method;
  int runs = 0;
  double validity_rate = 0.0;
  double mean_work = 0.0;
  double median_ms = 0.0;
  double p25_ms = 0.0;
  double p75_ms = 0.0;
  int failures = 0;
};

/// Method knobs shared by a bench sweep.
struct BenchOptions {
  EAParams ea;
  std::int64_t random_budget = 100'000'000;
  int model_episode_retries = 100;
};

/// Sampled validity protocol: n_samples greedy episodes with uniformly
/// sampled configurations (as in training); every graph counted valid is
/// re-checked against the constraints oracle.
struct ValidityStats {
  double rate = 0.0;
  double mean_iterations = 0.0;
  int samples = 0;
};
ValidityStats validity_rate(const GreedyGenerator& generator, int n_samples, std::uint64_t seed);

/// Runs one benchmark cell. Every run draws its own configuration of the
/// requested size, identical across methods for the same (set, size, run,
/// seed_base). The timed section is the generation loop only; model and
/// constraint loading happen outside. A trained-model generator is required
/// exactly for trained-model tasks.
BenchRow time_to_valid(const BenchTask& task, const ConstraintSet& cs,
                       const GreedyGenerator* generator, const BenchOptions& options);

/// Writes rows as CSV plus a markdown table (sets x sizes against methods).
/// Throws on empty input or unwritable paths; returns the two file paths.
std::pair<std::string, std::string> emit_report(const std::vector<BenchRow>& rows,
                                                const std::string& out_dir);

std::string bench_rows_to_csv(const std::vector<BenchRow>& rows);
std::vector<BenchRow> bench_rows_from_csv(const std::string& csv);
std::string bench_rows_to_markdown(const std::vector<BenchRow>& rows);

}  // namespace graphgen
