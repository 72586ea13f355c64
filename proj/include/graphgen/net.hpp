#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "graphgen/rng.hpp"

namespace graphgen {

/// One dense layer, y = W x + b. Weights are (out x in).
struct DenseLayer {
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;
};

/// Gradient accumulator mirroring an Mlp's layers.
struct MlpGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> bias;

  void set_zero();
  void scale(double factor);
  double squared_norm() const;
};

/// Fully connected network with rectified-linear hidden layers and a linear
/// output. Training math runs in double; forward passes write activations to
/// a caller-owned trace so a shared model stays immutable during collection.
class Mlp {
 public:
  struct Trace {
    // post[0] is the input batch, post[l] the activations after layer l
    // (post-ReLU for hidden layers, raw for the output layer).
    std::vector<Eigen::MatrixXd> post;
  };

  Mlp() = default;

  /// Orthogonally initialized network. Hidden layers use gain sqrt(2) (they
  /// are ReLU), the output layer uses `output_gain`.
  Mlp(const std::vector<int>& widths, double output_gain, Rng& rng);

  /// Batched forward pass; rows are samples.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input, Trace& trace) const;

  /// Accumulates d(loss)/d(parameters) into `grads` given d(loss)/d(output).
  void backward(const Trace& trace, const Eigen::MatrixXd& output_grad,
                MlpGradients& grads) const;

  MlpGradients zero_gradients() const;

  int input_size() const { return static_cast<int>(layers_.front().weights.cols()); }
  int output_size() const { return static_cast<int>(layers_.back().weights.rows()); }
  std::size_t parameter_count() const;

  /// Canonical layer-ordered flattening: per layer, weights row-major, then
  /// bias. This is the order parameters are serialized in.
  double parameter(std::size_t index) const;
  void set_parameter(std::size_t index, double value);
  std::vector<double> flat_parameters() const;
  void load_flat_parameters(const std::vector<double>& flat);

  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

 private:
  std::vector<DenseLayer> layers_;
};

/// Adam with bias correction; the learner's single optimizer flavor.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
                         double epsilon = 1e-8);

  void initialize(const Mlp& net);
  void step(Mlp& net, const MlpGradients& grads);
  void set_learning_rate(double learning_rate) { learning_rate_ = learning_rate; }

 private:
  double learning_rate_;
  double beta1_;
  double beta2_;
  double epsilon_;
  std::int64_t t_ = 0;
  std::vector<Eigen::MatrixXd> m_weights_, v_weights_;
  std::vector<Eigen::VectorXd> m_bias_, v_bias_;
};

/// Single-precision copy for the generation hot path.
struct InferenceNet {
  std::vector<Eigen::MatrixXf> weights;
  std::vector<Eigen::VectorXf> bias;

  static InferenceNet from(const Mlp& net);
  Eigen::VectorXf forward(const Eigen::VectorXf& input) const;
};

}  // namespace graphgen
