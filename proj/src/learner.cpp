#include "graphgen/learner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "graphgen/serialize.hpp"

namespace graphgen {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kHiddenWidths[3] = {128, 256, 128};
constexpr double kPolicyHeadGain = 0.01;
constexpr double kValueHeadGain = 1.0;

std::vector<int> network_widths(int input, int output) {
  return {input, kHiddenWidths[0], kHiddenWidths[1], kHiddenWidths[2], output};
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (const unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

// --- base64 for the parameter blobs ---------------------------------------

const char* kBase64Chars = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 3 <= bytes.size()) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out.push_back(kBase64Chars[(v >> 18) & 63]);
    out.push_back(kBase64Chars[(v >> 12) & 63]);
    out.push_back(kBase64Chars[(v >> 6) & 63]);
    out.push_back(kBase64Chars[v & 63]);
    i += 3;
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const std::uint32_t v = bytes[i] << 16;
    out.push_back(kBase64Chars[(v >> 18) & 63]);
    out.push_back(kBase64Chars[(v >> 12) & 63]);
    out.push_back('=');
    out.push_back('=');
  } else if (rest == 2) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out.push_back(kBase64Chars[(v >> 18) & 63]);
    out.push_back(kBase64Chars[(v >> 12) & 63]);
    out.push_back(kBase64Chars[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  std::array<int, 256> lookup;
  lookup.fill(-1);
  for (int i = 0; i < 64; ++i) lookup[static_cast<unsigned char>(kBase64Chars[i])] = i;
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  std::uint32_t acc = 0;
  int bits = 0;
  for (const char c : text) {
    if (c == '=') break;
    const int v = lookup[static_cast<unsigned char>(c)];
    if (v < 0) throw ParseError("invalid base64 in model artifact");
    acc = (acc << 6) | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xFF));
    }
  }
  return out;
}

// Parameters travel as little-endian 32-bit floats in canonical layer order.
std::string encode_parameters(const Mlp& net) {
  const auto flat = net.flat_parameters();
  std::vector<std::uint8_t> bytes;
  bytes.reserve(flat.size() * 4);
  for (const double value : flat) {
    const float f = static_cast<float>(value);
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    bytes.push_back(static_cast<std::uint8_t>(u & 0xFF));
    bytes.push_back(static_cast<std::uint8_t>((u >> 8) & 0xFF));
    bytes.push_back(static_cast<std::uint8_t>((u >> 16) & 0xFF));
    bytes.push_back(static_cast<std::uint8_t>((u >> 24) & 0xFF));
  }
  return base64_encode(bytes);
}

void decode_parameters(Mlp& net, const std::string& blob) {
  const auto bytes = base64_decode(blob);
  if (bytes.size() % 4 != 0) throw ParseError("parameter blob is not a float array");
  std::vector<double> flat;
  flat.reserve(bytes.size() / 4);
  for (std::size_t i = 0; i < bytes.size(); i += 4) {
    const std::uint32_t u = static_cast<std::uint32_t>(bytes[i]) |
                            (static_cast<std::uint32_t>(bytes[i + 1]) << 8) |
                            (static_cast<std::uint32_t>(bytes[i + 2]) << 16) |
                            (static_cast<std::uint32_t>(bytes[i + 3]) << 24);
    float f;
    std::memcpy(&f, &u, 4);
    flat.push_back(static_cast<double>(f));
  }
  net.load_flat_parameters(flat);
}

Mlp shape_only_mlp(const std::vector<int>& widths) {
  Mlp net;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    DenseLayer layer;
    layer.weights = Eigen::MatrixXd::Zero(widths[l + 1], widths[l]);
    layer.bias = Eigen::VectorXd::Zero(widths[l + 1]);
    net.layers().push_back(std::move(layer));
  }
  return net;
}

std::vector<int> widths_of(const Mlp& net) {
  std::vector<int> widths;
  widths.push_back(net.input_size());
  for (const auto& layer : net.layers()) widths.push_back(static_cast<int>(layer.weights.rows()));
  return widths;
}

Eigen::Map<const Eigen::VectorXd> obs_vector(const Observation& obs) {
  return {obs.data.data(), static_cast<Eigen::Index>(obs.data.size())};
}

// Row-wise log-softmax, numerically stable.
Eigen::MatrixXd log_softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out = logits;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const double peak = out.row(r).maxCoeff();
    const double lse = peak + std::log((out.row(r).array() - peak).exp().sum());
    out.row(r).array() -= lse;
  }
  return out;
}

}  // namespace

void check_train_spec(const TrainSpec& spec) {
  if (spec.rollout_length <= 0) throw ConfigError("rollout length must be positive");
  if (spec.total_steps == 0 || spec.total_steps % static_cast<std::uint64_t>(spec.rollout_length) != 0) {
    throw ConfigError("total steps (" + std::to_string(spec.total_steps) +
                      ") must be a positive multiple of the rollout length (" +
                      std::to_string(spec.rollout_length) + ")");
  }
  if (spec.minibatch_size <= 0 || spec.rollout_length % spec.minibatch_size != 0) {
    throw ConfigError("rollout length must be a multiple of the minibatch size");
  }
  if (spec.epochs <= 0) throw ConfigError("epochs must be positive");
}

std::string train_spec_to_json(const TrainSpec& spec) {
  ordered_json doc;
  doc["total_steps"] = spec.total_steps;
  doc["rollout_length"] = spec.rollout_length;
  doc["learning_rate"] = spec.learning_rate;
  doc["gamma"] = spec.gamma;
  doc["gae_lambda"] = spec.gae_lambda;
  doc["clip_range"] = spec.clip_range;
  doc["entropy_coef"] = spec.entropy_coef;
  doc["value_coef"] = spec.value_coef;
  doc["epochs"] = spec.epochs;
  doc["minibatch_size"] = spec.minibatch_size;
  doc["max_grad_norm"] = spec.max_grad_norm;
  doc["anneal_lr"] = spec.anneal_lr;
  doc["seed"] = spec.seed;
  return doc.dump();
}

PolicyModel PolicyModel::create(EnvSpec env_spec, Representation repr, TrainSpec train_spec) {
  PolicyModel model;
  model.repr = repr;
  model.env_spec = std::move(env_spec);
  model.train_spec = train_spec;
  model.seed = train_spec.seed;

  const int obs = Environment::observation_size(repr, model.env_spec.max_size,
                                                model.env_spec.constraints.alphabet().size());
  const int actions = Environment::action_space_size(repr, model.env_spec.max_size);
  Rng init_rng(train_spec.seed);
  model.policy = Mlp(network_widths(obs, actions), kPolicyHeadGain, init_rng);
  model.value = Mlp(network_widths(obs, 1), kValueHeadGain, init_rng);
  model.spec_hash = hex64(fnv1a64(env_spec_to_json(model.env_spec, repr) +
                                  model.env_spec.constraints.source_text()));
  return model;
}

int PolicyModel::observation_size() const {
  return Environment::observation_size(repr, env_spec.max_size,
                                       env_spec.constraints.alphabet().size());
}

int PolicyModel::action_space_size() const {
  return Environment::action_space_size(repr, env_spec.max_size);
}

double ActionDistribution::entropy() const {
  double h = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs(i) > 0.0) h -= probs(i) * log_probs(i);
  }
  return h;
}

int ActionDistribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    cumulative += probs(i);
    if (u < cumulative) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

int ActionDistribution::argmax() const {
  Eigen::Index best = 0;
  probs.maxCoeff(&best);
  return static_cast<int>(best);
}

std::pair<ActionDistribution, double> policy_forward(const PolicyModel& model,
                                                     const Observation& obs) {
  if (obs.size() != model.observation_size()) {
    throw ContractError("observation size " + std::to_string(obs.size()) +
                        " does not match the model's representation (" +
                        std::to_string(model.observation_size()) + ")");
  }
  Eigen::MatrixXd input(1, obs.size());
  input.row(0) = obs_vector(obs);
  const Eigen::MatrixXd logits = model.policy.forward(input);
  const Eigen::MatrixXd log_probs = log_softmax_rows(logits);
  ActionDistribution dist;
  dist.log_probs = log_probs.row(0).transpose();
  dist.probs = dist.log_probs.array().exp();
  const double value = model.value.forward(input)(0, 0);
  return {dist, value};
}

RolloutBuffer collect_rollout(Environment& env, const PolicyModel& model, int length,
                              Rng& action_rng) {
  RolloutBuffer buffer;
  buffer.observations.resize(length, model.observation_size());
  buffer.actions.reserve(static_cast<std::size_t>(length));
  buffer.log_probs.reserve(static_cast<std::size_t>(length));
  buffer.rewards.reserve(static_cast<std::size_t>(length));
  buffer.values.reserve(static_cast<std::size_t>(length));
  buffer.dones.reserve(static_cast<std::size_t>(length));

  if (env.done()) env.reset();
  double episode_reward = 0.0;

  for (int t = 0; t < length; ++t) {
    const Observation& obs = env.observation();
    buffer.observations.row(t) = obs_vector(obs);
    const auto [dist, value] = policy_forward(model, obs);
    const int action = dist.sample(action_rng);
    const StepOutcome outcome = env.step(action);

    buffer.actions.push_back(action);
    buffer.log_probs.push_back(dist.log_prob(action));
    buffer.rewards.push_back(outcome.reward);
    buffer.values.push_back(value);
    buffer.dones.push_back(outcome.done ? 1 : 0);
    episode_reward += outcome.reward;

    if (outcome.done) {
      buffer.completed_episodes.push_back(
          {episode_reward, outcome.info.cause == TerminationCause::valid,
           outcome.info.iterations});
      episode_reward = 0.0;
      env.reset();
    }
  }

  buffer.last_done = buffer.dones.back() != 0;
  buffer.last_value = policy_forward(model, env.observation()).second;
  return buffer;
}

GaeResult gae(const RolloutBuffer& buffer, double gamma, double lambda) {
  const int n = buffer.length();
  GaeResult result;
  result.advantages.assign(static_cast<std::size_t>(n), 0.0);
  result.returns.assign(static_cast<std::size_t>(n), 0.0);
  double running = 0.0;
  for (int t = n - 1; t >= 0; --t) {
    const bool done = buffer.dones[static_cast<std::size_t>(t)] != 0;
    const double next_value =
        (t == n - 1) ? buffer.last_value : buffer.values[static_cast<std::size_t>(t + 1)];
    const double mask = done ? 0.0 : 1.0;
    const double delta = buffer.rewards[static_cast<std::size_t>(t)] +
                         gamma * next_value * mask - buffer.values[static_cast<std::size_t>(t)];
    running = delta + gamma * lambda * mask * running;
    result.advantages[static_cast<std::size_t>(t)] = running;
    result.returns[static_cast<std::size_t>(t)] =
        running + buffer.values[static_cast<std::size_t>(t)];
  }
  return result;
}

double ppo_loss(const PolicyModel& model, const PpoBatch& batch, const TrainSpec& spec,
                MlpGradients* policy_grads, MlpGradients* value_grads, UpdateStats* stats) {
  const auto batch_size = static_cast<Eigen::Index>(batch.actions.size());
  const double inv_b = 1.0 / static_cast<double>(batch_size);

  Mlp::Trace policy_trace;
  const Eigen::MatrixXd logits = model.policy.forward(batch.observations, policy_trace);
  const Eigen::MatrixXd log_probs = log_softmax_rows(logits);
  const Eigen::MatrixXd probs = log_probs.array().exp();

  Mlp::Trace value_trace;
  const Eigen::MatrixXd values = model.value.forward(batch.observations, value_trace);

  double surrogate = 0.0;
  double entropy_total = 0.0;
  double value_total = 0.0;
  int clipped = 0;

  Eigen::MatrixXd dlogits = Eigen::MatrixXd::Zero(batch_size, logits.cols());
  Eigen::MatrixXd dvalues = Eigen::MatrixXd::Zero(batch_size, 1);

  for (Eigen::Index i = 0; i < batch_size; ++i) {
    const int action = batch.actions[static_cast<std::size_t>(i)];
    const double advantage = batch.advantages[static_cast<std::size_t>(i)];
    const double ratio =
        std::exp(log_probs(i, action) - batch.old_log_probs[static_cast<std::size_t>(i)]);
    const double clipped_ratio =
        std::clamp(ratio, 1.0 - spec.clip_range, 1.0 + spec.clip_range);
    const double loss_unclipped = -advantage * ratio;
    const double loss_clipped = -advantage * clipped_ratio;
    surrogate += std::max(loss_unclipped, loss_clipped);
    if (std::abs(ratio - 1.0) > spec.clip_range) ++clipped;

    double entropy = 0.0;
    for (Eigen::Index j = 0; j < probs.cols(); ++j) {
      if (probs(i, j) > 0.0) entropy -= probs(i, j) * log_probs(i, j);
    }
    entropy_total += entropy;

    const double value_diff = values(i, 0) - batch.returns[static_cast<std::size_t>(i)];
    value_total += value_diff * value_diff;

    if (policy_grads != nullptr) {
      // Chosen branch of the max decides whether the surrogate contributes a
      // gradient; a saturated clip is flat in the parameters.
      const double pg_coeff = (loss_unclipped >= loss_clipped) ? -advantage * ratio : 0.0;
      for (Eigen::Index j = 0; j < probs.cols(); ++j) {
        const double onehot = (j == action) ? 1.0 : 0.0;
        const double d_surrogate = pg_coeff * (onehot - probs(i, j));
        const double d_entropy = spec.entropy_coef * probs(i, j) * (log_probs(i, j) + entropy);
        dlogits(i, j) = inv_b * (d_surrogate + d_entropy);
      }
    }
    if (value_grads != nullptr) {
      dvalues(i, 0) = inv_b * spec.value_coef * 2.0 * value_diff;
    }
  }

  const double policy_loss = surrogate * inv_b;
  const double entropy_mean = entropy_total * inv_b;
  const double value_loss = value_total * inv_b;
  const double loss = policy_loss - spec.entropy_coef * entropy_mean + spec.value_coef * value_loss;

  if (policy_grads != nullptr) model.policy.backward(policy_trace, dlogits, *policy_grads);
  if (value_grads != nullptr) model.value.backward(value_trace, dvalues, *value_grads);

  if (stats != nullptr) {
    stats->policy_loss = policy_loss;
    stats->value_loss = value_loss;
    stats->entropy = entropy_mean;
    stats->clip_fraction = static_cast<double>(clipped) / static_cast<double>(batch_size);
  }
  return loss;
}

UpdateStats ppo_update(PolicyModel& model, const RolloutBuffer& buffer, const TrainSpec& spec,
                       AdamOptimizer& policy_opt, AdamOptimizer& value_opt, Rng& shuffle_rng) {
  const int n = buffer.length();
  if (n % spec.minibatch_size != 0) {
    throw ConfigError("buffer length must be a multiple of the minibatch size");
  }

  auto [advantages, returns] = gae(buffer, spec.gamma, spec.gae_lambda);

  // Normalized once per update, as collected.
  const double mean = std::accumulate(advantages.begin(), advantages.end(), 0.0) /
                      static_cast<double>(n);
  double variance = 0.0;
  for (const double a : advantages) variance += (a - mean) * (a - mean);
  const double stddev = std::sqrt(variance / static_cast<double>(n));
  for (double& a : advantages) a = (a - mean) / (stddev + 1e-8);

  std::vector<int> indices(static_cast<std::size_t>(n));
  std::iota(indices.begin(), indices.end(), 0);

  MlpGradients policy_grads = model.policy.zero_gradients();
  MlpGradients value_grads = model.value.zero_gradients();

  UpdateStats accumulated;
  int batches = 0;

  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    shuffle_rng.shuffle(indices);
    for (int start = 0; start < n; start += spec.minibatch_size) {
      PpoBatch batch;
      batch.observations.resize(spec.minibatch_size, buffer.observations.cols());
      batch.actions.reserve(static_cast<std::size_t>(spec.minibatch_size));
      for (int k = 0; k < spec.minibatch_size; ++k) {
        const int src = indices[static_cast<std::size_t>(start + k)];
        batch.observations.row(k) = buffer.observations.row(src);
        batch.actions.push_back(buffer.actions[static_cast<std::size_t>(src)]);
        batch.old_log_probs.push_back(buffer.log_probs[static_cast<std::size_t>(src)]);
        batch.advantages.push_back(advantages[static_cast<std::size_t>(src)]);
        batch.returns.push_back(returns[static_cast<std::size_t>(src)]);
      }

      policy_grads.set_zero();
      value_grads.set_zero();
      UpdateStats stats;
      const double loss = ppo_loss(model, batch, spec, &policy_grads, &value_grads, &stats);
      if (!std::isfinite(loss)) {
        throw TrainingError("training aborted: non-finite loss (policy " +
                            std::to_string(stats.policy_loss) + ", value " +
                            std::to_string(stats.value_loss) + ", entropy " +
                            std::to_string(stats.entropy) + ")");
      }

      // Global norm clip across both networks, matching a single shared
      // parameter list.
      const double norm =
          std::sqrt(policy_grads.squared_norm() + value_grads.squared_norm());
      if (norm > spec.max_grad_norm && norm > 0.0) {
        const double factor = spec.max_grad_norm / norm;
        policy_grads.scale(factor);
        value_grads.scale(factor);
      }
      policy_opt.step(model.policy, policy_grads);
      value_opt.step(model.value, value_grads);

      accumulated.policy_loss += stats.policy_loss;
      accumulated.value_loss += stats.value_loss;
      accumulated.entropy += stats.entropy;
      accumulated.clip_fraction += stats.clip_fraction;
      ++batches;
    }
  }

  accumulated.policy_loss /= batches;
  accumulated.value_loss /= batches;
  accumulated.entropy /= batches;
  accumulated.clip_fraction /= batches;
  return accumulated;
}

TrainResult train(EnvSpec env_spec, Representation repr, TrainSpec train_spec,
                  const std::function<void(const TrainLogRow&)>& on_update) {
  check_train_spec(train_spec);

  PolicyModel model = PolicyModel::create(env_spec, repr, train_spec);

  // Independent streams for the environment, action sampling, and shuffling.
  Rng aux(train_spec.seed ^ 0x9e3779b97f4a7c15ULL);
  Environment env(model.env_spec, repr, aux.fork_seed());
  Rng action_rng(aux.fork_seed());
  Rng shuffle_rng(aux.fork_seed());

  AdamOptimizer policy_opt(train_spec.learning_rate);
  AdamOptimizer value_opt(train_spec.learning_rate);
  policy_opt.initialize(model.policy);
  value_opt.initialize(model.value);

  const auto updates =
      train_spec.total_steps / static_cast<std::uint64_t>(train_spec.rollout_length);
  TrainResult result;
  for (std::uint64_t update = 1; update <= updates; ++update) {
    if (train_spec.anneal_lr) {
      const double fraction =
          1.0 - static_cast<double>(update - 1) / static_cast<double>(updates);
      policy_opt.set_learning_rate(train_spec.learning_rate * fraction);
      value_opt.set_learning_rate(train_spec.learning_rate * fraction);
    }
    const RolloutBuffer buffer =
        collect_rollout(env, model, train_spec.rollout_length, action_rng);
    const UpdateStats stats =
        ppo_update(model, buffer, train_spec, policy_opt, value_opt, shuffle_rng);

    TrainLogRow row;
    row.update = static_cast<int>(update);
    row.steps = update * static_cast<std::uint64_t>(train_spec.rollout_length);
    if (!buffer.completed_episodes.empty()) {
      double reward_sum = 0.0;
      int valid = 0;
      for (const auto& episode : buffer.completed_episodes) {
        reward_sum += episode.total_reward;
        if (episode.valid) ++valid;
      }
      row.mean_reward = reward_sum / static_cast<double>(buffer.completed_episodes.size());
      row.validity_rate =
          static_cast<double>(valid) / static_cast<double>(buffer.completed_episodes.size());
    }
    row.entropy = stats.entropy;
    result.log.push_back(row);
    if (on_update) on_update(row);
  }

  model.steps_trained = train_spec.total_steps;
  result.model = std::move(model);
  return result;
}

std::string train_log_to_csv(const std::vector<TrainLogRow>& log) {
  std::ostringstream out;
  out << "update,steps,mean_reward,validity_rate,entropy\n";
  char line[160];
  for (const auto& row : log) {
    std::snprintf(line, sizeof(line), "%d,%llu,%.6f,%.6f,%.6f\n", row.update,
                  static_cast<unsigned long long>(row.steps), row.mean_reward,
                  row.validity_rate, row.entropy);
    out << line;
  }
  return out.str();
}

GreedyGenerator::GreedyGenerator(const PolicyModel& model)
    : env_spec_(model.env_spec), repr_(model.repr), policy_(InferenceNet::from(model.policy)) {}

std::pair<GraphState, EpisodeTrace> GreedyGenerator::generate(const GraphConfig& config,
                                                              std::uint64_t seed) const {
  Environment env(env_spec_, repr_, seed);
  env.reset(config);

  EpisodeTrace trace;
  Eigen::VectorXf input(env.observation_size());
  while (!env.done()) {
    const auto& data = env.observation().data;
    for (Eigen::Index i = 0; i < input.size(); ++i) {
      input(i) = static_cast<float>(data[static_cast<std::size_t>(i)]);
    }
    const Eigen::VectorXf logits = policy_.forward(input);
    Eigen::Index action = 0;
    logits.maxCoeff(&action);
    const StepOutcome outcome = env.step(static_cast<int>(action));
    trace.steps.push_back({static_cast<int>(action), outcome.reward, outcome.info.changed});
    if (outcome.done) {
      trace.cause = outcome.info.cause;
      trace.iterations = outcome.info.iterations;
      trace.changes = outcome.info.changes;
      trace.valid = outcome.info.valid;
    }
  }
  return {env.state(), trace};
}

std::pair<GraphState, EpisodeTrace> generate(const PolicyModel& model, const GraphConfig& config,
                                             std::uint64_t seed) {
  return GreedyGenerator(model).generate(config, seed);
}

std::string model_to_json(const PolicyModel& model) {
  ordered_json doc;
  doc["format"] = "graphgen-model";
  doc["format_version"] = 1;
  doc["env_spec"] = ordered_json::parse(env_spec_to_json(model.env_spec, model.repr));
  doc["constraints"] = model.env_spec.constraints.source_text();
  doc["train_spec"] = ordered_json::parse(train_spec_to_json(model.train_spec));
  doc["metadata"] = {{"steps_trained", model.steps_trained},
                     {"seed", model.seed},
                     {"spec_hash", model.spec_hash}};
  doc["policy"] = {{"widths", widths_of(model.policy)}, {"parameters", encode_parameters(model.policy)}};
  doc["value"] = {{"widths", widths_of(model.value)}, {"parameters", encode_parameters(model.value)}};
  return doc.dump(2) + "\n";
}

PolicyModel model_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("model artifact is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "graphgen-model") {
    throw ParseError("not a model artifact");
  }
  if (doc.value("format_version", 0) != 1) {
    throw ParseError("unsupported model format version");
  }

  PolicyModel model;
  const auto& env = doc.at("env_spec");
  model.repr = representation_from_name(env.at("representation").get<std::string>());
  model.env_spec.max_size = env.at("max_size").get<int>();
  model.env_spec.constraints_path = env.at("constraints_path").get<std::string>();
  model.env_spec.alpha = env.at("alpha").get<double>();
  model.env_spec.max_changes = env.at("max_changes").get<int>();
  model.env_spec.max_iterations = env.at("max_iterations").get<int>();
  model.env_spec.edge_prob = env.at("edge_prob").get<double>();
  model.env_spec.constraints = ConstraintSet::parse(doc.at("constraints").get<std::string>());

  const auto& train = doc.at("train_spec");
  model.train_spec.total_steps = train.at("total_steps").get<std::uint64_t>();
  model.train_spec.rollout_length = train.at("rollout_length").get<int>();
  model.train_spec.learning_rate = train.at("learning_rate").get<double>();
  model.train_spec.gamma = train.at("gamma").get<double>();
  model.train_spec.gae_lambda = train.at("gae_lambda").get<double>();
  model.train_spec.clip_range = train.at("clip_range").get<double>();
  model.train_spec.entropy_coef = train.at("entropy_coef").get<double>();
  model.train_spec.value_coef = train.at("value_coef").get<double>();
  model.train_spec.epochs = train.at("epochs").get<int>();
  model.train_spec.minibatch_size = train.at("minibatch_size").get<int>();
  model.train_spec.max_grad_norm = train.at("max_grad_norm").get<double>();
  model.train_spec.anneal_lr = train.value("anneal_lr", false);
  model.train_spec.seed = train.at("seed").get<std::uint64_t>();

  const auto& meta = doc.at("metadata");
  model.steps_trained = meta.at("steps_trained").get<std::uint64_t>();
  model.seed = meta.at("seed").get<std::uint64_t>();
  model.spec_hash = meta.at("spec_hash").get<std::string>();

  model.policy = shape_only_mlp(doc.at("policy").at("widths").get<std::vector<int>>());
  decode_parameters(model.policy, doc.at("policy").at("parameters").get<std::string>());
  model.value = shape_only_mlp(doc.at("value").at("widths").get<std::vector<int>>());
  decode_parameters(model.value, doc.at("value").at("parameters").get<std::string>());

  if (model.policy.input_size() != model.observation_size() ||
      model.policy.output_size() != model.action_space_size()) {
    throw ParseError("model networks do not match the embedded environment spec");
  }
  return model;
}

void save_model(const PolicyModel& model, const std::string& path) {
  write_text_file(path, model_to_json(model));
}

PolicyModel load_model(const std::string& path) {
  return model_from_json(read_text_file(path));
}

}  // namespace graphgen
