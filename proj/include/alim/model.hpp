#pragma once

#include <cstdint>
#include <string>

#include "alim/types.hpp"

namespace alim {

enum class Arch { Linear, Mlp };

// Softmax classifier: either a single linear layer or one hidden layer with
// rectifier activation. Weights are row-major [out x in].
struct ModelParams {
    Arch arch = Arch::Linear;
    int in_dim = 0;
    int hidden_dim = 0;  // 0 for Linear
    int classes = 0;
    Vec w1, b1;  // Linear: [classes x in]; Mlp: [hidden x in]
    Vec w2, b2;  // Mlp only: [classes x hidden]

    static ModelParams make_linear(int in_dim, int classes, std::uint64_t seed);
    static ModelParams make_mlp(int in_dim, int hidden_dim, int classes,
                                std::uint64_t seed);
};

struct Gradients {
    Vec w1, b1, w2, b2;
    static Gradients zeros_like(const ModelParams& params);
    void accumulate(const Gradients& g, double weight = 1.0);
    void scale(double s);
};

// Softmax probabilities; always on the simplex.
Vec forward(const ModelParams& params, const Vec& features);

// Cross-entropy against a constant pseudo-label target. P is floored at
// 1e-30 inside the log.
double pll_loss(const Vec& p, const Vec& w);

// Exact analytic gradients of pll_loss(forward(x), w) for one sample.
// The output-layer logit gradient is (P - w).
Gradients backward(const ModelParams& params, const Vec& features, const Vec& w);

struct OptimizerState {
    Gradients velocity;
    double base_lr = 0.01;
    double momentum = 0.9;
    double weight_decay = 0.001;
    int epoch = 0;
    int total_epochs = 1;

    static OptimizerState make(const ModelParams& params, double base_lr,
                               double momentum, double weight_decay,
                               int total_epochs);
    // Cosine schedule: base_lr * 0.5 * (1 + cos(pi * epoch / total_epochs)).
    double learning_rate() const;
};

// v <- m*v + g + wd*theta; theta <- theta - lr(t)*v.
void sgd_step(ModelParams& params, const Gradients& grads, OptimizerState& state);

void save_checkpoint(const ModelParams& params, const std::string& path);
ModelParams load_checkpoint(const std::string& path);

}  // namespace alim
