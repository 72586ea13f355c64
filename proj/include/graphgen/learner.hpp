#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graphgen/environment.hpp"
#include "graphgen/net.hpp"

namespace graphgen {

/// Clipped-surrogate training hyperparameters. Defaults are the project's
/// standard recipe; the architecture itself (128/256/128 extractors for both
/// heads) is fixed.
struct TrainSpec {
  std::uint64_t total_steps = 0;
  int rollout_length = 1250;
  double learning_rate = 3e-4;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_range = 0.2;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  int epochs = 10;
  int minibatch_size = 125;
  double max_grad_norm = 0.5;
  bool anneal_lr = false;  // optional linear decay to zero over the run
  std::uint64_t seed = 0;
};

/// Throws ConfigError unless total_steps divides into rollouts and rollouts
/// into minibatches.
void check_train_spec(const TrainSpec& spec);

std::string train_spec_to_json(const TrainSpec& spec);

/// A trained (or initialized) agent: separate policy and value networks over
/// the same observation encoding, plus everything needed to rebuild its
/// environment.
struct PolicyModel {
  Representation repr = Representation::graph_wide;
  EnvSpec env_spec;
  TrainSpec train_spec;
  Mlp policy;
  Mlp value;
  std::uint64_t steps_trained = 0;
  std::uint64_t seed = 0;
  std::string spec_hash;

  /// Freshly initialized networks sized to the environment's observation and action spaces.
  static PolicyModel create(EnvSpec env_spec, Representation repr, TrainSpec train_spec);

  int observation_size() const;
  int action_space_size() const;
};

/// Categorical policy output.
struct ActionDistribution {
  Eigen::VectorXd probs;
  Eigen::VectorXd log_probs;

  double entropy() const;
  double log_prob(int action) const { return log_probs(action); }
  int sample(Rng& rng) const;
  int argmax() const;
};

/// Runs both networks on one observation.
std::pair<ActionDistribution, double> policy_forward(const PolicyModel& model,
                                                     const Observation& obs);

/// Fixed-capacity on-policy storage for one update.
struct RolloutBuffer {
  Eigen::MatrixXd observations;  // rollout_length x observation_size
  std::vector<int> actions;
  std::vector<double> log_probs;
  std::vector<double> rewards;
  std::vector<double> values;
  std::vector<std::uint8_t> dones;  // episode ended at this transition
  double last_value = 0.0;          // bootstrap for a buffer cut mid-episode
  bool last_done = false;

  struct EpisodeStat {
    double total_reward = 0.0;
    bool valid = false;
    int iterations = 0;
  };
  std::vector<EpisodeStat> completed_episodes;

  int length() const { return static_cast<int>(actions.size()); }
};

/// Collects exactly `length` transitions, sampling actions from the policy
/// and auto-resetting the environment (fresh sampled configuration) on done.
RolloutBuffer collect_rollout(Environment& env, const PolicyModel& model, int length,
                              Rng& action_rng);

/// Generalized advantage estimation with episode-boundary resets.
/// Advantages are raw here; ppo_update normalizes them once per update.
struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};
GaeResult gae(const RolloutBuffer& buffer, double gamma, double lambda);

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
};

/// A minibatch view used by the update and by gradient tests.
struct PpoBatch {
  Eigen::MatrixXd observations;
  std::vector<int> actions;
  std::vector<double> old_log_probs;
  std::vector<double> advantages;
  std::vector<double> returns;
};

/// Full PPO objective on one batch: clipped surrogate + entropy bonus +
/// value loss. Gradients accumulate into the two accumulators when given.
double ppo_loss(const PolicyModel& model, const PpoBatch& batch, const TrainSpec& spec,
                MlpGradients* policy_grads, MlpGradients* value_grads,
                UpdateStats* stats = nullptr);

/// One update: `epochs` passes of shuffled minibatches over the buffer,
/// global gradient-norm clipping, Adam steps on both networks.
/// Throws TrainingError if the loss goes non-finite.
UpdateStats ppo_update(PolicyModel& model, const RolloutBuffer& buffer, const TrainSpec& spec,
                       AdamOptimizer& policy_opt, AdamOptimizer& value_opt, Rng& shuffle_rng);

struct TrainLogRow {
  int update = 0;
  std::uint64_t steps = 0;
  double mean_reward = 0.0;
  double validity_rate = 0.0;
  double entropy = 0.0;
};

struct TrainResult {
  PolicyModel model;
  std::vector<TrainLogRow> log;
};

/// End-to-end training loop: alternate rollout collection and updates until
/// total_steps. Deterministic for a fixed spec and seed (single thread).
/// The optional callback sees every log row as it is produced.
TrainResult train(EnvSpec env_spec, Representation repr, TrainSpec train_spec,
                  const std::function<void(const TrainLogRow&)>& on_update = {});

std::string train_log_to_csv(const std::vector<TrainLogRow>& log);

/// One recorded inference episode.
struct EpisodeTrace {
  struct Step {
    int action = 0;
    double reward = 0.0;
    bool changed = false;
  };
  std::vector<Step> steps;
  TerminationCause cause = TerminationCause::none;
  int iterations = 0;
  int changes = 0;
  bool valid = false;
};

/// Inference-time generation: single-precision policy, greedy argmax actions.
/// Build once, generate many times; generation cost excludes this setup.
class GreedyGenerator {
 public:
  explicit GreedyGenerator(const PolicyModel& model);

  std::pair<GraphState, EpisodeTrace> generate(const GraphConfig& config,
                                               std::uint64_t seed) const;

  const EnvSpec& env_spec() const { return env_spec_; }
  Representation representation() const { return repr_; }

 private:
  EnvSpec env_spec_;
  Representation repr_;
  InferenceNet policy_;
};

/// Convenience wrapper: one greedy episode from a model.
std::pair<GraphState, EpisodeTrace> generate(const PolicyModel& model, const GraphConfig& config,
                                             std::uint64_t seed);

/// Model artifact (JSON, format-versioned): parameters as little-endian
/// 32-bit floats in layer order, plus the environment and training specs.
std::string model_to_json(const PolicyModel& model);
PolicyModel model_from_json(const std::string& text);
void save_model(const PolicyModel& model, const std::string& path);
PolicyModel load_model(const std::string& path);

}  // namespace graphgen
