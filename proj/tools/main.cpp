// Command-line front end: train models, generate and validate graphs, run
// benchmarks, compose larger graphs from generated parts, convert formats.
//
// Exit codes: 0 success, 1 domain or validation failure, 2 usage error.

#include <filesystem>
#include <future>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphgen/bench.hpp"
#include "graphgen/composer.hpp"
#include "graphgen/serialize.hpp"

namespace {

using namespace graphgen;

// "Source=2,Converter=2,Pool=1" against the set's alphabet (aliases resolve).
GraphConfig parse_config_string(const std::string& text, const ConstraintSet& cs) {
  GraphConfig config;
  config.counts.assign(static_cast<std::size_t>(cs.num_node_types()), 0);
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const auto item = text.substr(start, end - start);
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("configuration entry '" + item + "' must look like Type=count");
    }
    const auto name = item.substr(0, eq);
    const auto code = cs.alphabet().find(name);
    if (!code.has_value() || cs.alphabet().is_empty(*code)) {
      throw ConfigError("unknown node type '" + name + "' in configuration");
    }
    int count = 0;
    try {
      count = std::stoi(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad count in configuration entry '" + item + "'");
    }
    config.counts[static_cast<std::size_t>(*code)] += count;
    start = end + 1;
  }
  for (const int c : config.counts) config.size += c;
  return config;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) out.push_back(text.substr(start, end - start));
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

std::string path_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

// model.json -> model.train.csv, next to the artifact.
std::string train_log_path(const std::string& model_path) {
  std::filesystem::path p(model_path);
  p.replace_extension();
  return p.string() + ".train.csv";
}

void print_constraint_warnings(const ConstraintSet& cs) {
  for (const auto& warning : cs.warnings()) {
    std::cerr << "warning: " << warning << "\n";
  }
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string constraints_path;
  std::string repr = "graph-wide";
  int max_size = 6;
  std::uint64_t steps = 0;  // 0: default for the representation
  int rollout = 1250;
  double alpha = 5.0;
  double edge_prob = 0.5;
  int epochs = 10;
  int minibatch = 125;
  double entropy_coef = 0.01;
  double learning_rate = 3e-4;
  double gamma = 0.99;
  bool anneal = false;
  int max_changes = 0;     // 0: spec default triang(max_size-1)
  int max_iterations = 0;  // 0: spec default 2*triang(max_size-1)
  std::string out;
  std::uint64_t seed = 0;
  bool quiet = false;
};

int cmd_train(const TrainArgs& args) {
  const auto cs = load_constraint_file(args.constraints_path);
  print_constraint_warnings(cs);
  const auto repr = representation_from_name(args.repr);

  EnvSpec env_spec = make_env_spec(cs, args.constraints_path, args.max_size);
  env_spec.alpha = args.alpha;
  env_spec.edge_prob = args.edge_prob;
  if (args.max_changes > 0) env_spec.max_changes = args.max_changes;
  if (args.max_iterations > 0) env_spec.max_iterations = args.max_iterations;

  TrainSpec train_spec;
  train_spec.total_steps =
      args.steps != 0 ? args.steps
                      : (repr == Representation::graph_narrow ? 500'000ull : 1'500'000ull);
  train_spec.rollout_length = args.rollout;
  train_spec.epochs = args.epochs;
  train_spec.minibatch_size = args.minibatch;
  train_spec.entropy_coef = args.entropy_coef;
  train_spec.learning_rate = args.learning_rate;
  train_spec.gamma = args.gamma;
  train_spec.anneal_lr = args.anneal;
  train_spec.seed = args.seed;
  check_train_spec(train_spec);

  const auto updates = train_spec.total_steps / static_cast<std::uint64_t>(args.rollout);
  std::uint64_t next_report = 1;
  const auto result = train(env_spec, repr, train_spec, [&](const TrainLogRow& row) {
    if (args.quiet) return;
    if (static_cast<std::uint64_t>(row.update) >= next_report ||
        static_cast<std::uint64_t>(row.update) == updates) {
      std::cerr << "update " << row.update << "/" << updates << "  steps " << row.steps
                << "  mean_reward " << row.mean_reward << "  validity " << row.validity_rate
                << "  entropy " << row.entropy << "\n";
      next_report = next_report * 2;
    }
  });

  save_model(result.model, args.out);
  write_text_file(train_log_path(args.out), train_log_to_csv(result.log));
  std::cout << "model: " << args.out << "\n";
  std::cout << "log: " << train_log_path(args.out) << "\n";
  std::cout << "steps: " << result.model.steps_trained << "\n";
  if (!result.log.empty()) {
    std::cout << "final_validity_rate: " << result.log.back().validity_rate << "\n";
  }
  return 0;
}

struct GenerateArgs {
  std::string model_path;
  std::string config_text;
  int size = 0;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
};

int cmd_generate(const GenerateArgs& args) {
  const auto model = load_model(args.model_path);
  const auto& cs = model.env_spec.constraints;

  GraphConfig config;
  if (!args.config_text.empty()) {
    config = parse_config_string(args.config_text, cs);
  } else if (args.size > 0) {
    Rng rng(args.seed ^ 0xc2b2ae3d27d4eb4fULL);
    config = sample_counts_for_size(cs, args.size, rng);
  } else {
    throw ConfigError("generate needs --config or --size");
  }

  const GreedyGenerator generator(model);
  const auto [state, trace] = generator.generate(config, args.seed);

  if (!args.out.empty()) {
    if (args.format == "dot") {
      write_text_file(args.out, graph_to_dot(state, cs));
    } else {
      write_text_file(args.out, graph_to_json(state, cs.alphabet()));
    }
  }
  std::cout << "valid: " << (trace.valid ? "true" : "false") << "\n";
  std::cout << "iterations: " << trace.iterations << "\n";
  std::cout << "changes: " << trace.changes << "\n";
  std::cout << "termination: " << termination_cause_name(trace.cause) << "\n";
  return 0;
}

struct ValidateArgs {
  std::string constraints_path;
  std::string graph_path;
  std::uint64_t seed = 0;  // accepted everywhere for scripting symmetry
};

int cmd_validate(const ValidateArgs& args) {
  const auto cs = load_constraint_file(args.constraints_path);
  print_constraint_warnings(cs);
  const auto state = graph_from_json(read_text_file(args.graph_path), cs.alphabet());
  const auto report = total_violations(cs, state);
  for (int node = 0; node < state.n(); ++node) {
    if (state.node_is_empty(node)) continue;
    std::cout << "node " << node << " (" << cs.alphabet().display_name(state.type_of(node))
              << "): " << report.per_node[static_cast<std::size_t>(node)] << "\n";
  }
  std::cout << "total: " << report.total << " (missing " << report.missing_required
            << ", disallowed " << report.disallowed_edges << ")\n";
  std::cout << "valid: " << (report.total == 0 ? "true" : "false") << "\n";
  return report.total == 0 ? 0 : 1;
}

struct BenchArgs {
  std::string sets_text;
  std::string sizes_text = "5,6,7";
  std::string methods_text = "trained-model,ea,random-search";
  int runs = 100;
  int samples = 0;
  std::string out_dir = "bench-out";
  std::string models_dir;
  std::uint64_t seed = 0;
  bool parallel = false;
  int ea_population = 50;
  std::int64_t random_budget = 100'000'000;
  int model_retries = 100;
};

int cmd_bench(const BenchArgs& args) {
  const auto set_paths = split_list(args.sets_text);
  if (set_paths.empty()) throw ConfigError("bench needs at least one constraint set");
  std::vector<int> sizes;
  for (const auto& s : split_list(args.sizes_text)) sizes.push_back(std::stoi(s));
  std::vector<BenchMethod> methods;
  for (const auto& m : split_list(args.methods_text)) {
    methods.push_back(bench_method_from_name(m));
  }

  BenchOptions options;
  options.ea.population = args.ea_population;
  options.random_budget = args.random_budget;
  options.model_episode_retries = args.model_retries;

  struct PreparedTask {
    BenchTask task;
    const ConstraintSet* cs = nullptr;
    const GreedyGenerator* generator = nullptr;
  };

  std::vector<ConstraintSet> sets;
  sets.reserve(set_paths.size());
  for (const auto& path : set_paths) sets.push_back(load_constraint_file(path));

  // Generators are materialized up front; the timed sections never include
  // model deserialization.
  std::vector<std::unique_ptr<GreedyGenerator>> generators;
  std::vector<PreparedTask> prepared;
  const bool wants_model =
      std::find(methods.begin(), methods.end(), BenchMethod::trained_model) != methods.end();

  std::vector<std::string> validity_lines;
  for (std::size_t set_index = 0; set_index < sets.size(); ++set_index) {
    const auto set_id = path_stem(set_paths[set_index]);
    for (const int size : sizes) {
      const GreedyGenerator* generator = nullptr;
      if (wants_model) {
        if (args.models_dir.empty()) {
          throw ConfigError("trained-model tasks need --models-dir");
        }
        const auto model_path = (std::filesystem::path(args.models_dir) /
                                 (set_id + "-size" + std::to_string(size) + ".json"))
                                    .string();
        if (!std::filesystem::exists(model_path)) {
          throw ConfigError("missing model artifact: " + model_path);
        }
        generators.push_back(std::make_unique<GreedyGenerator>(load_model(model_path)));
        generator = generators.back().get();
        if (args.samples > 0) {
          const auto stats = validity_rate(*generator, args.samples, args.seed);
          char line[160];
          std::snprintf(line, sizeof(line), "%s,%d,%d,%.6f,%.3f\n", set_id.c_str(), size,
                        stats.samples, stats.rate, stats.mean_iterations);
          validity_lines.emplace_back(line);
        }
      }
      for (const auto method : methods) {
        BenchTask task;
        task.method = method;
        task.set_id = set_id;
        task.size = size;
        task.runs = args.runs;
        task.seed_base = args.seed;
        prepared.push_back({task, &sets[set_index],
                            method == BenchMethod::trained_model ? generator : nullptr});
      }
    }
  }

  std::vector<BenchRow> rows(prepared.size());
  if (args.parallel) {
    // Opt-in: distinct tasks on separate threads, merged by task index.
    // Wall-clock columns can contend; the sequential default keeps them quiet.
    std::vector<std::future<BenchRow>> futures;
    futures.reserve(prepared.size());
    for (const auto& p : prepared) {
      futures.push_back(std::async(std::launch::async, [&p, &options]() {
        return time_to_valid(p.task, *p.cs, p.generator, options);
      }));
    }
    for (std::size_t i = 0; i < futures.size(); ++i) rows[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < prepared.size(); ++i) {
      rows[i] = time_to_valid(prepared[i].task, *prepared[i].cs, prepared[i].generator, options);
      std::cerr << "bench " << rows[i].set_id << " size " << rows[i].size << " "
                << rows[i].method << ": median " << rows[i].median_ms << " ms ("
                << rows[i].failures << " failures)\n";
    }
  }

  const auto [csv_path, md_path] = emit_report(rows, args.out_dir);
  std::cout << "report: " << csv_path << "\n";
  std::cout << "table: " << md_path << "\n";
  if (!validity_lines.empty()) {
    std::string csv = "set,size,samples,validity_rate,mean_iterations\n";
    for (const auto& line : validity_lines) csv += line;
    const auto validity_path = (std::filesystem::path(args.out_dir) / "validity.csv").string();
    write_text_file(validity_path, csv);
    std::cout << "validity: " << validity_path << "\n";
  }
  return 0;
}

struct ComposeArgs {
  std::string model_path;
  std::string plan_path;
  std::string out_stem;
  std::uint64_t seed = 0;
};

int cmd_compose(const ComposeArgs& args) {
  const auto model = load_model(args.model_path);
  const auto& cs = model.env_spec.constraints;
  const GreedyGenerator generator(model);

  nlohmann::json plan;
  try {
    plan = nlohmann::json::parse(read_text_file(args.plan_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("plan file is not valid JSON: ") + e.what());
  }
  if (!plan.is_object() || !plan.contains("base") || !plan.contains("subgraphs")) {
    throw ParseError("plan needs 'base' and 'subgraphs'");
  }
  if (!plan["subgraphs"].is_array() || plan["subgraphs"].empty()) {
    throw ParseError("plan lists no subgraphs");
  }
  const int retries = plan.value("retries", 20);

  Rng rng(args.seed);
  const auto generate_valid = [&](const GraphConfig& config) {
    for (int attempt = 0; attempt < retries; ++attempt) {
      auto [state, trace] = generator.generate(config, rng.fork_seed());
      if (trace.valid) return state;
    }
    throw CompositionError("no valid graph for a plan configuration within " +
                           std::to_string(retries) + " attempts");
  };

  const auto config_of = [&](const nlohmann::json& obj) {
    GraphConfig config;
    config.counts.assign(static_cast<std::size_t>(cs.num_node_types()), 0);
    for (const auto& [key, value] : obj.items()) {
      const auto code = cs.alphabet().find(key);
      if (!code.has_value() || cs.alphabet().is_empty(*code)) {
        throw ParseError("unknown node type '" + key + "' in plan configuration");
      }
      config.counts[static_cast<std::size_t>(*code)] += value.get<int>();
    }
    for (const int c : config.counts) config.size += c;
    return config;
  };

  auto composite = make_composite(generate_valid(config_of(plan["base"])));
  for (const auto& entry : plan["subgraphs"]) {
    if (!entry.contains("config") || !entry.contains("junction")) {
      throw ParseError("every subgraph needs 'config' and 'junction'");
    }
    const auto& junction = entry["junction"];
    const auto from = cs.alphabet().find(junction.at("from").get<std::string>());
    const auto to = cs.alphabet().find(junction.at("to").get<std::string>());
    if (!from || !to) throw ParseError("junction references an unknown type");
    const JunctionRule rule{*from, *to, junction.value("edges", 1)};
    concatenate(composite, generate_valid(config_of(entry["config"])), rule, cs, rng);
  }

  const bool valid = validate_composite(composite, cs);
  write_text_file(args.out_stem + ".json", composite_to_json(composite, cs.alphabet()));
  write_text_file(args.out_stem + ".dot", composite_to_dot(composite, cs));
  std::cout << "graph: " << args.out_stem << ".json\n";
  std::cout << "dot: " << args.out_stem << ".dot\n";
  std::cout << "subgraphs: " << composite.subgraphs.size() << "\n";
  std::cout << "nodes: " << composite.total_real_nodes() << "\n";
  std::cout << "valid: " << (valid ? "true" : "false") << "\n";
  return valid ? 0 : 1;
}

struct ExportArgs {
  std::string graph_path;
  std::string constraints_path;
  std::string format = "dot";
  std::string out;
  std::uint64_t seed = 0;
};

int cmd_export(const ExportArgs& args) {
  const auto cs = load_constraint_file(args.constraints_path);
  const auto state = graph_from_json(read_text_file(args.graph_path), cs.alphabet());
  const auto text =
      args.format == "dot" ? graph_to_dot(state, cs) : graph_to_json(state, cs.alphabet());
  if (args.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(args.out, text);
    std::cout << "wrote: " << args.out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "graphgen: constraint-driven graph generation (learned policies, search baselines)"};
  app.require_subcommand(1);
  app.footer(
      "Reproduce the full experiment grid (sets 1-5, sizes 4-10, all three\n"
      "representations) by scripting the train command:\n"
      "  for set in set1 set2 set3 set4 set5; do\n"
      "    for size in 4 5 6 7 8 9 10; do\n"
      "      for repr in graph-narrow graph-wide pcgrl-wide; do\n"
      "        steps=1500000; [ \"$repr\" = graph-narrow ] && steps=500000\n"
      "        graphgen train --constraints data/constraints/$set.json \\\n"
      "          --repr $repr --max-size $size --steps $steps \\\n"
      "          --out models/$set-$repr-size$size.json --seed 0\n"
      "      done\n"
      "    done\n"
      "  done\n"
      "Benchmark models with `graphgen bench`, which expects\n"
      "<set>-size<K>.json artifacts in --models-dir.");

  TrainArgs train_args;
  auto* train_cmd =
      app.add_subcommand("train", "Train a generation policy on a constraint file");
  train_cmd->add_option("--constraints", train_args.constraints_path, "constraint JSON file")
      ->required();
  train_cmd
      ->add_option("--repr", train_args.repr,
                   "representation: graph-narrow | graph-wide | pcgrl-wide")
      ->check(CLI::IsMember(
          {"graph-narrow", "graph-wide", "pcgrl-wide", "narrow", "wide", "pcgrl"}));
  train_cmd->add_option("--max-size", train_args.max_size, "maximum controllable graph size");
  train_cmd->add_option("--steps", train_args.steps,
                        "total environment steps (default 500k narrow, 1.5M wide)");
  train_cmd->add_option("--rollout", train_args.rollout, "steps per policy update");
  train_cmd->add_option("--alpha", train_args.alpha, "terminal validity bonus");
  train_cmd->add_option("--edge-prob", train_args.edge_prob, "initial noise density");
  train_cmd->add_option("--epochs", train_args.epochs, "optimization epochs per update");
  train_cmd->add_option("--minibatch", train_args.minibatch, "minibatch size");
  train_cmd->add_option("--entropy-coef", train_args.entropy_coef, "entropy bonus weight");
  train_cmd->add_option("--lr", train_args.learning_rate, "learning rate");
  train_cmd->add_option("--gamma", train_args.gamma, "discount factor");
  train_cmd->add_flag("--anneal", train_args.anneal, "linearly decay the learning rate to zero");
  train_cmd->add_option("--max-changes", train_args.max_changes, "episode change budget");
  train_cmd->add_option("--max-iterations", train_args.max_iterations, "episode step budget");
  train_cmd->add_option("--out", train_args.out, "model artifact path")->required();
  train_cmd->add_option("--seed", train_args.seed, "random seed");
  train_cmd->add_flag("--quiet", train_args.quiet, "suppress progress output");

  GenerateArgs generate_args;
  auto* generate_cmd =
      app.add_subcommand("generate", "Generate one graph from a trained model");
  generate_cmd->add_option("--model", generate_args.model_path, "model artifact")->required();
  generate_cmd->add_option("--config", generate_args.config_text,
                           "configuration, e.g. Source=2,Converter=2,Pool=1");
  generate_cmd->add_option("--size", generate_args.size,
                           "graph size (counts sampled when --config is absent)");
  generate_cmd->add_option("--out", generate_args.out, "output file");
  generate_cmd->add_option("--format", generate_args.format, "json | dot")
      ->check(CLI::IsMember({"json", "dot"}));
  generate_cmd->add_option("--seed", generate_args.seed, "random seed");

  ValidateArgs validate_args;
  auto* validate_cmd =
      app.add_subcommand("validate", "Check a graph file against a constraint file");
  validate_cmd->add_option("--constraints", validate_args.constraints_path, "constraint JSON")
      ->required();
  validate_cmd->add_option("--graph", validate_args.graph_path, "graph JSON")->required();
  validate_cmd->add_option("--seed", validate_args.seed, "accepted for scripting symmetry");

  BenchArgs bench_args;
  auto* bench_cmd =
      app.add_subcommand("bench", "Time-to-valid and validity-rate benchmarks across methods");
  bench_cmd->add_option("--sets", bench_args.sets_text, "comma list of constraint files")
      ->required();
  bench_cmd->add_option("--sizes", bench_args.sizes_text, "comma list of graph sizes");
  bench_cmd->add_option("--methods", bench_args.methods_text,
                        "comma list: trained-model,ea,random-search");
  bench_cmd->add_option("--runs", bench_args.runs, "generations per cell");
  bench_cmd->add_option("--samples", bench_args.samples,
                        "validity-rate sample count per model (0 = skip)");
  bench_cmd->add_option("--out", bench_args.out_dir, "report directory");
  bench_cmd->add_option("--models-dir", bench_args.models_dir,
                        "directory of <set>-size<k>.json artifacts");
  bench_cmd->add_option("--seed", bench_args.seed, "seed base");
  bench_cmd->add_flag("--parallel", bench_args.parallel, "run tasks on separate threads");
  bench_cmd->add_option("--ea-population", bench_args.ea_population, "EA population size");
  bench_cmd->add_option("--random-budget", bench_args.random_budget,
                        "random-search evaluation budget");
  bench_cmd->add_option("--model-retries", bench_args.model_retries,
                        "episode retries per trained-model run");

  ComposeArgs compose_args;
  auto* compose_cmd =
      app.add_subcommand("compose", "Concatenate generated subgraphs following a plan file");
  compose_cmd->add_option("--model", compose_args.model_path, "model artifact")->required();
  compose_cmd->add_option("--plan", compose_args.plan_path, "plan JSON")->required();
  compose_cmd->add_option("--out", compose_args.out_stem, "output stem (.json/.dot appended)")
      ->required();
  compose_cmd->add_option("--seed", compose_args.seed, "random seed");

  ExportArgs export_args;
  auto* export_cmd = app.add_subcommand("export", "Convert a graph file to DOT or JSON");
  export_cmd->add_option("--graph", export_args.graph_path, "graph JSON")->required();
  export_cmd
      ->add_option("--constraints", export_args.constraints_path,
                   "constraint JSON (types, arrows)")
      ->required();
  export_cmd->add_option("--format", export_args.format, "dot | json")
      ->check(CLI::IsMember({"dot", "json"}));
  export_cmd->add_option("--out", export_args.out, "output file (stdout when absent)");
  export_cmd->add_option("--seed", export_args.seed, "accepted for scripting symmetry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(train_cmd)) return cmd_train(train_args);
    if (app.got_subcommand(generate_cmd)) return cmd_generate(generate_args);
    if (app.got_subcommand(validate_cmd)) return cmd_validate(validate_args);
    if (app.got_subcommand(bench_cmd)) return cmd_bench(bench_args);
    if (app.got_subcommand(compose_cmd)) return cmd_compose(compose_args);
    if (app.got_subcommand(export_cmd)) return cmd_export(export_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
