#pragma once

#include <vector>

#include "migo/rng.hpp"

namespace migo {

/// One-hidden-layer ReLU network, doubles throughout. Gradients come from
/// in-module backpropagation and are checked against finite differences in
/// the test suite.
struct MlpParams {
    int in = 0, hidden = 0, out = 0;
    std::vector<double> w1, b1; // hidden x in, hidden
    std::vector<double> w2, b2; // out x hidden, out

    static MlpParams init(int in, int hidden, int out, Rng& rng);

    std::vector<double> forward(const std::vector<double>& x) const;

    std::size_t parameter_count() const { return w1.size() + b1.size() + w2.size() + b2.size(); }
    double& parameter(std::size_t i);
    double parameter(std::size_t i) const;
};

struct MlpGradients {
    std::vector<double> w1, b1, w2, b2;
    void zero(const MlpParams& shape);
    double& parameter(std::size_t i);
};

struct QBatchItem {
    std::vector<double> input;
    int action = 0;
    double target = 0.0;
};

/// Mean squared TD error over the batch plus l2 * sum of squared weights
/// (biases excluded). Accumulates gradients when `grads` is non-null.
double q_loss(const MlpParams& p, const std::vector<QBatchItem>& batch, double l2,
              MlpGradients* grads);

void sgd_step(MlpParams& p, const MlpGradients& g, double lr);

/// theta_target <- (1 - rate) * theta_target + rate * theta
void soft_update(MlpParams& target, const MlpParams& online, double rate);

} // namespace migo
