#include <doctest.h>

#include <cmath>

#include "graphgen/net.hpp"

using namespace graphgen;

TEST_CASE("orthogonal initialization produces orthonormal rows or columns") {
  Rng rng(1);
  Mlp net({6, 8, 3}, 1.0, rng);
  const auto& w0 = net.layers()[0].weights;  // 8x6: orthonormal columns
  const Eigen::MatrixXd gram = (w0.transpose() * w0) / 2.0;  // gain sqrt(2) squared
  CHECK((gram - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-9);
  const auto& w1 = net.layers()[1].weights;  // 3x8: orthonormal rows (gain 1)
  const Eigen::MatrixXd gram1 = w1 * w1.transpose();
  CHECK((gram1 - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-9);
  for (const auto& layer : net.layers()) {
    CHECK(layer.bias.norm() == 0.0);
  }
}

TEST_CASE("backward matches central finite differences") {
  Rng rng(7);
  Mlp net({5, 9, 7, 4}, 1.0, rng);

  // A fixed quadratic readout makes the loss scalar and smooth.
  Eigen::MatrixXd input(3, 5);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 5; ++c) input(r, c) = rng.normal();
  }
  Eigen::MatrixXd target(3, 4);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) target(r, c) = rng.normal();
  }

  const auto loss_of = [&](const Mlp& m) {
    const Eigen::MatrixXd out = m.forward(input);
    return 0.5 * (out - target).squaredNorm();
  };

  Mlp::Trace trace;
  const Eigen::MatrixXd out = net.forward(input, trace);
  MlpGradients grads = net.zero_gradients();
  net.backward(trace, out - target, grads);

  // Flatten analytic gradients in the canonical parameter order.
  std::vector<double> flat_grads;
  for (std::size_t l = 0; l < grads.weights.size(); ++l) {
    for (Eigen::Index r = 0; r < grads.weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < grads.weights[l].cols(); ++c) {
        flat_grads.push_back(grads.weights[l](r, c));
      }
    }
    for (Eigen::Index i = 0; i < grads.bias[l].size(); ++i) {
      flat_grads.push_back(grads.bias[l](i));
    }
  }

  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t p = 0; p < net.parameter_count(); p += 7) {  // stride keeps it quick
    Mlp plus = net;
    plus.set_parameter(p, net.parameter(p) + h);
    Mlp minus = net;
    minus.set_parameter(p, net.parameter(p) - h);
    const double fd = (loss_of(plus) - loss_of(minus)) / (2.0 * h);
    const double analytic = flat_grads[p];
    const double scale = std::max({1.0, std::abs(fd), std::abs(analytic)});
    worst = std::max(worst, std::abs(fd - analytic) / scale);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("adam leaves parameters untouched for zero gradients") {
  Rng rng(3);
  Mlp net({4, 6, 2}, 0.01, rng);
  const auto before = net.flat_parameters();
  AdamOptimizer opt(3e-4);
  opt.initialize(net);
  MlpGradients zeros = net.zero_gradients();
  opt.step(net, zeros);
  opt.step(net, zeros);
  CHECK(net.flat_parameters() == before);
}

TEST_CASE("adam descends a simple regression objective") {
  Rng rng(5);
  Mlp net({2, 8, 1}, 1.0, rng);
  Eigen::MatrixXd input(4, 2);
  input << 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0;
  Eigen::MatrixXd target(4, 1);
  target << 0.0, 1.0, 1.0, 0.0;

  AdamOptimizer opt(0.01);
  opt.initialize(net);
  double first_loss = 0.0;
  double last_loss = 0.0;
  for (int iter = 0; iter < 400; ++iter) {
    Mlp::Trace trace;
    const Eigen::MatrixXd out = net.forward(input, trace);
    const double loss = 0.5 * (out - target).squaredNorm();
    if (iter == 0) first_loss = loss;
    last_loss = loss;
    MlpGradients grads = net.zero_gradients();
    net.backward(trace, out - target, grads);
    opt.step(net, grads);
  }
  CHECK(last_loss < 0.05 * first_loss);
}

TEST_CASE("flat parameter round-trip and inference copy agree") {
  Rng rng(11);
  Mlp net({6, 5, 3}, 1.0, rng);
  const auto flat = net.flat_parameters();
  Mlp clone({6, 5, 3}, 1.0, rng);  // different random weights
  clone.load_flat_parameters(flat);
  CHECK(clone.flat_parameters() == flat);

  const InferenceNet fast = InferenceNet::from(net);
  Eigen::VectorXd x(6);
  x << 0.2, -1.0, 0.5, 0.0, 1.5, -0.3;
  const Eigen::MatrixXd slow_out = net.forward(x.transpose());
  const Eigen::VectorXf fast_out = fast.forward(x.cast<float>());
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(slow_out(0, i) - static_cast<double>(fast_out(i))) < 1e-4);
  }
}
