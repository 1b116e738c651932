#include "migo/mlp.hpp"

#include <cmath>

#include "migo/errors.hpp"

namespace migo {

MlpParams MlpParams::init(int in, int hidden, int out, Rng& rng) {
    MlpParams p;
    p.in = in;
    p.hidden = hidden;
    p.out = out;
    p.w1.resize(static_cast<std::size_t>(hidden) * static_cast<std::size_t>(in));
    p.b1.assign(static_cast<std::size_t>(hidden), 0.0);
    p.w2.resize(static_cast<std::size_t>(out) * static_cast<std::size_t>(hidden));
    p.b2.assign(static_cast<std::size_t>(out), 0.0);
    const double s1 = std::sqrt(2.0 / in);
    const double s2 = std::sqrt(2.0 / hidden);
    for (double& w : p.w1) w = rng.gaussian() * s1;
    for (double& w : p.w2) w = rng.gaussian() * s2;
    return p;
}

std::vector<double> MlpParams::forward(const std::vector<double>& x) const {
    std::vector<double> h(static_cast<std::size_t>(hidden));
    for (int j = 0; j < hidden; ++j) {
        double a = b1[static_cast<std::size_t>(j)];
        const double* row = &w1[static_cast<std::size_t>(j) * static_cast<std::size_t>(in)];
        for (int i = 0; i < in; ++i) a += row[i] * x[static_cast<std::size_t>(i)];
        h[static_cast<std::size_t>(j)] = a > 0.0 ? a : 0.0;
    }
    std::vector<double> q(static_cast<std::size_t>(out));
    for (int k = 0; k < out; ++k) {
        double a = b2[static_cast<std::size_t>(k)];
        const double* row = &w2[static_cast<std::size_t>(k) * static_cast<std::size_t>(hidden)];
        for (int j = 0; j < hidden; ++j) a += row[j] * h[static_cast<std::size_t>(j)];
        q[static_cast<std::size_t>(k)] = a;
    }
    return q;
}

double& MlpParams::parameter(std::size_t i) {
    if (i < w1.size()) return w1[i];
    i -= w1.size();
    if (i < b1.size()) return b1[i];
    i -= b1.size();
    if (i < w2.size()) return w2[i];
    i -= w2.size();
    return b2[i];
}

double MlpParams::parameter(std::size_t i) const {
    return const_cast<MlpParams*>(this)->parameter(i);
}

void MlpGradients::zero(const MlpParams& shape) {
    w1.assign(shape.w1.size(), 0.0);
    b1.assign(shape.b1.size(), 0.0);
    w2.assign(shape.w2.size(), 0.0);
    b2.assign(shape.b2.size(), 0.0);
}

double& MlpGradients::parameter(std::size_t i) {
    if (i < w1.size()) return w1[i];
    i -= w1.size();
    if (i < b1.size()) return b1[i];
    i -= b1.size();
    if (i < w2.size()) return w2[i];
    i -= w2.size();
    return b2[i];
}

double q_loss(const MlpParams& p, const std::vector<QBatchItem>& batch, double l2,
              MlpGradients* grads) {
    if (batch.empty()) throw ValidationError("q_loss needs a non-empty batch");
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    std::vector<double> h(static_cast<std::size_t>(p.hidden));
    std::vector<double> pre(static_cast<std::size_t>(p.hidden));
    for (const QBatchItem& item : batch) {
        for (int j = 0; j < p.hidden; ++j) {
            double a = p.b1[static_cast<std::size_t>(j)];
            const double* row = &p.w1[static_cast<std::size_t>(j) * static_cast<std::size_t>(p.in)];
            for (int i = 0; i < p.in; ++i) a += row[i] * item.input[static_cast<std::size_t>(i)];
            pre[static_cast<std::size_t>(j)] = a;
            h[static_cast<std::size_t>(j)] = a > 0.0 ? a : 0.0;
        }
        const int k = item.action;
        double qa = p.b2[static_cast<std::size_t>(k)];
        const double* row2 = &p.w2[static_cast<std::size_t>(k) * static_cast<std::size_t>(p.hidden)];
        for (int j = 0; j < p.hidden; ++j) qa += row2[j] * h[static_cast<std::size_t>(j)];

        const double err = qa - item.target;
        loss += err * err * inv_n;
        if (!grads) continue;

        const double dq = 2.0 * err * inv_n;
        grads->b2[static_cast<std::size_t>(k)] += dq;
        double* gw2 = &grads->w2[static_cast<std::size_t>(k) * static_cast<std::size_t>(p.hidden)];
        for (int j = 0; j < p.hidden; ++j) {
            gw2[j] += dq * h[static_cast<std::size_t>(j)];
            if (pre[static_cast<std::size_t>(j)] > 0.0) {
                const double dh = dq * row2[j];
                grads->b1[static_cast<std::size_t>(j)] += dh;
                double* gw1 =
                    &grads->w1[static_cast<std::size_t>(j) * static_cast<std::size_t>(p.in)];
                for (int i = 0; i < p.in; ++i) gw1[i] += dh * item.input[static_cast<std::size_t>(i)];
            }
        }
    }
    if (l2 > 0.0) {
        for (std::size_t i = 0; i < p.w1.size(); ++i) {
            loss += l2 * p.w1[i] * p.w1[i];
            if (grads) grads->w1[i] += 2.0 * l2 * p.w1[i];
        }
        for (std::size_t i = 0; i < p.w2.size(); ++i) {
            loss += l2 * p.w2[i] * p.w2[i];
            if (grads) grads->w2[i] += 2.0 * l2 * p.w2[i];
        }
    }
    return loss;
}

void sgd_step(MlpParams& p, const MlpGradients& g, double lr) {
    for (std::size_t i = 0; i < p.w1.size(); ++i) p.w1[i] -= lr * g.w1[i];
    for (std::size_t i = 0; i < p.b1.size(); ++i) p.b1[i] -= lr * g.b1[i];
    for (std::size_t i = 0; i < p.w2.size(); ++i) p.w2[i] -= lr * g.w2[i];
    for (std::size_t i = 0; i < p.b2.size(); ++i) p.b2[i] -= lr * g.b2[i];
}

void soft_update(MlpParams& target, const MlpParams& online, double rate) {
    auto blend = [rate](std::vector<double>& t, const std::vector<double>& o) {
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = (1.0 - rate) * t[i] + rate * o[i];
    };
    blend(target.w1, online.w1);
    blend(target.b1, online.b1);
    blend(target.w2, online.w2);
    blend(target.b2, online.b2);
}

} // namespace migo
