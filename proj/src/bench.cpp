#include "graphgen/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "graphgen/serialize.hpp"

namespace graphgen {

namespace {

using clock_type = std::chrono::steady_clock;

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (const unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

// Shared across methods so every method sees the same configuration for the
// same (set, size, run); the method tag only decorrelates the search streams.
std::uint64_t config_seed(const BenchTask& task, int run) {
  return task.seed_base ^ fnv1a64(task.set_id + "#" + std::to_string(task.size) + "#" +
                                  std::to_string(run));
}

std::uint64_t method_seed(const BenchTask& task, int run) {
  return config_seed(task, run) ^ fnv1a64(bench_method_name(task.method));
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double position = p * (static_cast<double>(values.size()) - 1.0);
  const auto lower = static_cast<std::size_t>(std::floor(position));
  const auto upper = static_cast<std::size_t>(std::ceil(position));
  const double weight = position - static_cast<double>(lower);
  return values[lower] * (1.0 - weight) + values[upper] * weight;
}

struct TimedRun {
  bool success = false;
  double ms = 0.0;
  double work = 0.0;
};

}  // namespace

std::string bench_method_name(BenchMethod method) {
  switch (method) {
    case BenchMethod::trained_model: return "trained-model";
    case BenchMethod::evolutionary: return "ea";
    case BenchMethod::random_search: return "random-search";
  }
  return "unknown";
}

BenchMethod bench_method_from_name(const std::string& name) {
  if (name == "trained-model" || name == "model") return BenchMethod::trained_model;
  if (name == "ea" || name == "evolutionary") return BenchMethod::evolutionary;
  if (name == "random-search" || name == "random") return BenchMethod::random_search;
  throw ParseError("unknown benchmark method '" + name +
                   "' (expected trained-model, ea, or random-search)");
}

ValidityStats validity_rate(const GreedyGenerator& generator, int n_samples,
                            std::uint64_t seed) {
  const auto& cs = generator.env_spec().constraints;
  Rng rng(seed);
  ValidityStats stats;
  stats.samples = n_samples;
  std::int64_t iterations = 0;
  int valid = 0;
  for (int i = 0; i < n_samples; ++i) {
    const GraphConfig config =
        sample_configuration(cs, generator.env_spec().max_size, rng);
    const auto [state, trace] = generator.generate(config, rng.fork_seed());
    iterations += trace.iterations;
    if (trace.valid && is_valid(cs, state)) ++valid;
  }
  stats.rate = static_cast<double>(valid) / static_cast<double>(n_samples);
  stats.mean_iterations = static_cast<double>(iterations) / static_cast<double>(n_samples);
  return stats;
}

BenchRow time_to_valid(const BenchTask& task, const ConstraintSet& cs,
                       const GreedyGenerator* generator, const BenchOptions& options) {
  if (task.runs < 1) throw ConfigError("a benchmark task needs at least one run");
  if (task.method == BenchMethod::trained_model) {
    if (generator == nullptr) throw ConfigError("trained-model tasks need a model");
    if (task.size > generator->env_spec().max_size) {
      throw ConfigError("size " + std::to_string(task.size) +
                        " exceeds the model's trained ceiling");
    }
  }

  BenchRow row;
  row.set_id = task.set_id;
  row.size = task.size;
  row.method = bench_method_name(task.method);
  row.runs = task.runs;

  std::vector<double> times_ms;
  double work_total = 0.0;
  int successes = 0;

  for (int run = 0; run < task.runs; ++run) {
    Rng config_rng(config_seed(task, run));
    const GraphConfig config = sample_counts_for_size(cs, task.size, config_rng);
    const std::uint64_t seed = method_seed(task, run);

    TimedRun timed;
    switch (task.method) {
      case BenchMethod::trained_model: {
        // Greedy episodes restarted from fresh noise until validity; the
        // model itself is loaded long before this point.
        const auto start = clock_type::now();
        Rng retry_rng(seed);
        for (int attempt = 0; attempt < options.model_episode_retries; ++attempt) {
          const auto [state, trace] = generator->generate(config, retry_rng.fork_seed());
          timed.work += trace.iterations;
          if (trace.valid && is_valid(cs, state)) {
            timed.success = true;
            break;
          }
        }
        timed.ms = std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
        break;
      }
      case BenchMethod::evolutionary: {
        EAParams params = options.ea;
        params.seed = seed;
        const auto [state, stats] = ea_generate(cs, config, task.size, params);
        timed = {stats.success && is_valid(cs, state), stats.duration_ms,
                 static_cast<double>(stats.evaluations)};
        break;
      }
      case BenchMethod::random_search: {
        const auto [state, stats] =
            random_search(cs, config, task.size, seed, options.random_budget);
        timed = {stats.success && is_valid(cs, state), stats.duration_ms,
                 static_cast<double>(stats.evaluations)};
        break;
      }
    }

    work_total += timed.work;
    if (timed.success) {
      ++successes;
      times_ms.push_back(timed.ms);
    }
  }

  row.validity_rate = static_cast<double>(successes) / static_cast<double>(task.runs);
  row.mean_work = work_total / static_cast<double>(task.runs);
  row.failures = task.runs - successes;
  row.median_ms = percentile(times_ms, 0.50);
  row.p25_ms = percentile(times_ms, 0.25);
  row.p75_ms = percentile(times_ms, 0.75);
  return row;
}

std::string bench_rows_to_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "set,size,method,runs,validity_rate,mean_work,median_ms,p25_ms,p75_ms,failures\n";
  char line[256];
  for (const auto& row : rows) {
    std::snprintf(line, sizeof(line), "%s,%d,%s,%d,%.6f,%.3f,%.6f,%.6f,%.6f,%d\n",
                  row.set_id.c_str(), row.size, row.method.c_str(), row.runs,
                  row.validity_rate, row.mean_work, row.median_ms, row.p25_ms, row.p75_ms,
                  row.failures);
    out << line;
  }
  return out.str();
}

std::vector<BenchRow> bench_rows_from_csv(const std::string& csv) {
  std::vector<BenchRow> rows;
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty benchmark CSV");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string field;
    std::vector<std::string> parts;
    while (std::getline(fields, field, ',')) parts.push_back(field);
    if (parts.size() != 10) throw ParseError("malformed benchmark CSV row: " + line);
    BenchRow row;
    row.set_id = parts[0];
    row.size = std::stoi(parts[1]);
    row.method = parts[2];
    row.runs = std::stoi(parts[3]);
    row.validity_rate = std::stod(parts[4]);
    row.mean_work = std::stod(parts[5]);
    row.median_ms = std::stod(parts[6]);
    row.p25_ms = std::stod(parts[7]);
    row.p75_ms = std::stod(parts[8]);
    row.failures = std::stoi(parts[9]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string bench_rows_to_markdown(const std::vector<BenchRow>& rows) {
  // One line per (set, size); one median column per method, in first-seen order.
  std::vector<std::string> methods;
  for (const auto& row : rows) {
    if (std::find(methods.begin(), methods.end(), row.method) == methods.end()) {
      methods.push_back(row.method);
    }
  }
  std::vector<std::pair<std::string, int>> cells;
  std::map<std::pair<std::string, int>, std::map<std::string, const BenchRow*>> table;
  for (const auto& row : rows) {
    const auto key = std::make_pair(row.set_id, row.size);
    if (table.find(key) == table.end()) cells.push_back(key);
    table[key][row.method] = &row;
  }

  std::ostringstream out;
  out << "| Set | Size |";
  for (const auto& method : methods) out << " " << method << " (median ms) |";
  out << "\n|---|---|";
  for (std::size_t i = 0; i < methods.size(); ++i) out << "---|";
  out << "\n";
  for (const auto& key : cells) {
    out << "| " << key.first << " | " << key.second << " |";
    for (const auto& method : methods) {
      const auto& per_method = table.at(key);
      const auto it = per_method.find(method);
      if (it == per_method.end()) {
        out << " - |";
      } else {
        char cell[64];
        std::snprintf(cell, sizeof(cell), "%.3f", it->second->median_ms);
        out << " " << cell;
        if (it->second->failures > 0) out << " (" << it->second->failures << " failed)";
        out << " |";
      }
    }
    out << "\n";
  }
  return out.str();
}

std::pair<std::string, std::string> emit_report(const std::vector<BenchRow>& rows,
                                                const std::string& out_dir) {
  if (rows.empty()) throw ConfigError("no benchmark rows to report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const auto csv_path = (std::filesystem::path(out_dir) / "bench.csv").string();
  const auto md_path = (std::filesystem::path(out_dir) / "bench.md").string();
  write_text_file(csv_path, bench_rows_to_csv(rows));
  write_text_file(md_path, bench_rows_to_markdown(rows));
  return {csv_path, md_path};
}

}  // namespace graphgen
