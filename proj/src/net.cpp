#include "graphgen/net.hpp"

#include <cmath>

#include "graphgen/errors.hpp"

namespace graphgen {

void MlpGradients::set_zero() {
  for (auto& w : weights) w.setZero();
  for (auto& b : bias) b.setZero();
}

void MlpGradients::scale(double factor) {
  for (auto& w : weights) w *= factor;
  for (auto& b : bias) b *= factor;
}

double MlpGradients::squared_norm() const {
  double total = 0.0;
  for (const auto& w : weights) total += w.squaredNorm();
  for (const auto& b : bias) total += b.squaredNorm();
  return total;
}

namespace {

// Orthogonal matrix from the QR of a Gaussian draw, sign-fixed so the result
// is unique for a given random input.
Eigen::MatrixXd orthogonal_matrix(int rows, int cols, double gain, Rng& rng) {
  const int big = std::max(rows, cols);
  const int small = std::min(rows, cols);
  Eigen::MatrixXd gaussian(big, small);
  for (int r = 0; r < big; ++r) {
    for (int c = 0; c < small; ++c) gaussian(r, c) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
  const Eigen::MatrixXd r_factor = qr.matrixQR().topRows(small);
  for (int c = 0; c < small; ++c) {
    if (r_factor(c, c) < 0.0) q.col(c) *= -1.0;
  }
  Eigen::MatrixXd result = (rows >= cols) ? q : Eigen::MatrixXd(q.transpose());
  return gain * result;
}

}  // namespace

Mlp::Mlp(const std::vector<int>& widths, double output_gain, Rng& rng) {
  if (widths.size() < 2) throw ContractError("an Mlp needs at least input and output widths");
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const bool output_layer = l + 2 == widths.size();
    const double gain = output_layer ? output_gain : std::sqrt(2.0);
    DenseLayer layer;
    layer.weights = orthogonal_matrix(widths[l + 1], widths[l], gain, rng);
    layer.bias = Eigen::VectorXd::Zero(widths[l + 1]);
    layers_.push_back(std::move(layer));
  }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input) const {
  Trace trace;
  return forward(input, trace);
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input, Trace& trace) const {
  if (input.cols() != layers_.front().weights.cols()) {
    throw ContractError("observation width " + std::to_string(input.cols()) +
                        " does not match network input " +
                        std::to_string(layers_.front().weights.cols()));
  }
  trace.post.clear();
  trace.post.reserve(layers_.size() + 1);
  trace.post.push_back(input);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd z =
        (trace.post.back() * layers_[l].weights.transpose()).rowwise() +
        layers_[l].bias.transpose();
    if (l + 1 < layers_.size()) z = z.cwiseMax(0.0);
    trace.post.push_back(std::move(z));
  }
  return trace.post.back();
}

void Mlp::backward(const Trace& trace, const Eigen::MatrixXd& output_grad,
                   MlpGradients& grads) const {
  Eigen::MatrixXd delta = output_grad;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    grads.weights[l] += delta.transpose() * trace.post[l];
    grads.bias[l] += delta.colwise().sum().transpose();
    if (l > 0) {
      delta = (delta * layers_[l].weights).eval();
      // ReLU mask from the post-activation values of the layer below.
      delta = delta.cwiseProduct(
          (trace.post[l].array() > 0.0).cast<double>().matrix());
    }
  }
}

MlpGradients Mlp::zero_gradients() const {
  MlpGradients grads;
  for (const auto& layer : layers_) {
    grads.weights.emplace_back(Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
    grads.bias.emplace_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
  return grads;
}

std::size_t Mlp::parameter_count() const {
  std::size_t total = 0;
  for (const auto& layer : layers_) {
    total += static_cast<std::size_t>(layer.weights.size()) +
             static_cast<std::size_t>(layer.bias.size());
  }
  return total;
}

double Mlp::parameter(std::size_t index) const {
  for (const auto& layer : layers_) {
    const auto w_count = static_cast<std::size_t>(layer.weights.size());
    if (index < w_count) {
      const auto row = index / static_cast<std::size_t>(layer.weights.cols());
      const auto col = index % static_cast<std::size_t>(layer.weights.cols());
      return layer.weights(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }
    index -= w_count;
    const auto b_count = static_cast<std::size_t>(layer.bias.size());
    if (index < b_count) return layer.bias(static_cast<Eigen::Index>(index));
    index -= b_count;
  }
  throw ContractError("parameter index out of range");
}

void Mlp::set_parameter(std::size_t index, double value) {
  for (auto& layer : layers_) {
    const auto w_count = static_cast<std::size_t>(layer.weights.size());
    if (index < w_count) {
      const auto row = index / static_cast<std::size_t>(layer.weights.cols());
      const auto col = index % static_cast<std::size_t>(layer.weights.cols());
      layer.weights(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = value;
      return;
    }
    index -= w_count;
    const auto b_count = static_cast<std::size_t>(layer.bias.size());
    if (index < b_count) {
      layer.bias(static_cast<Eigen::Index>(index)) = value;
      return;
    }
    index -= b_count;
  }
  throw ContractError("parameter index out of range");
}

std::vector<double> Mlp::flat_parameters() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto& layer : layers_) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) flat.push_back(layer.weights(r, c));
    }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) flat.push_back(layer.bias(i));
  }
  return flat;
}

void Mlp::load_flat_parameters(const std::vector<double>& flat) {
  if (flat.size() != parameter_count()) {
    throw ParseError("parameter blob holds " + std::to_string(flat.size()) + " values, expected " +
                     std::to_string(parameter_count()));
  }
  std::size_t index = 0;
  for (auto& layer : layers_) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) layer.weights(r, c) = flat[index++];
    }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias(i) = flat[index++];
  }
}

AdamOptimizer::AdamOptimizer(double learning_rate, double beta1, double beta2, double epsilon)
    : learning_rate_(learning_rate), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {}

void AdamOptimizer::initialize(const Mlp& net) {
  m_weights_.clear();
  v_weights_.clear();
  m_bias_.clear();
  v_bias_.clear();
  for (const auto& layer : net.layers()) {
    m_weights_.emplace_back(Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
    v_weights_.emplace_back(Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
    m_bias_.emplace_back(Eigen::VectorXd::Zero(layer.bias.size()));
    v_bias_.emplace_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
  t_ = 0;
}

void AdamOptimizer::step(Mlp& net, const MlpGradients& grads) {
  ++t_;
  const double correction1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double correction2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto& layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    m_weights_[l] = beta1_ * m_weights_[l] + (1.0 - beta1_) * grads.weights[l];
    v_weights_[l] = beta2_ * v_weights_[l] +
                    (1.0 - beta2_) * grads.weights[l].array().square().matrix();
    layers[l].weights.array() -=
        learning_rate_ * (m_weights_[l].array() / correction1) /
        ((v_weights_[l].array() / correction2).sqrt() + epsilon_);

    m_bias_[l] = beta1_ * m_bias_[l] + (1.0 - beta1_) * grads.bias[l];
    v_bias_[l] = beta2_ * v_bias_[l] + (1.0 - beta2_) * grads.bias[l].array().square().matrix();
    layers[l].bias.array() -= learning_rate_ * (m_bias_[l].array() / correction1) /
                              ((v_bias_[l].array() / correction2).sqrt() + epsilon_);
  }
}

InferenceNet InferenceNet::from(const Mlp& net) {
  InferenceNet out;
  for (const auto& layer : net.layers()) {
    out.weights.push_back(layer.weights.cast<float>());
    out.bias.push_back(layer.bias.cast<float>());
  }
  return out;
}

Eigen::VectorXf InferenceNet::forward(const Eigen::VectorXf& input) const {
  Eigen::VectorXf h = input;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    h = (weights[l] * h + bias[l]).eval();
    if (l + 1 < weights.size()) h = h.cwiseMax(0.0f);
  }
  return h;
}

}  // namespace graphgen
