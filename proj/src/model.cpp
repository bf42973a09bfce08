#include "alim/model.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "alim/rng.hpp"

namespace alim {

namespace {

Vec init_uniform(std::size_t count, int fan_in, std::mt19937_64& rng) {
    double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Vec out(count);
    for (double& v : out) v = dist(rng);
    return out;
}

Vec softmax(Vec logits) {
    double zmax = logits[0];
    for (double v : logits) zmax = std::max(zmax, v);
    double sum = 0.0;
    for (double& v : logits) {
        v = std::exp(v - zmax);
        sum += v;
    }
    for (double& v : logits) v /= sum;
    return logits;
}

// y = W x + b, W row-major [rows x cols]
Vec affine(const Vec& w, const Vec& b, const Vec& x) {
    std::size_t rows = b.size();
    std::size_t cols = x.size();
    Vec y(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = b[r];
        const double* row = w.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

void check_input(const ModelParams& params, const Vec& x) {
    if (static_cast<int>(x.size()) != params.in_dim)
        throw std::invalid_argument("model: feature dimension mismatch");
}

}  // namespace

ModelParams ModelParams::make_linear(int in_dim, int classes, std::uint64_t seed) {
    ModelParams p;
    p.arch = Arch::Linear;
    p.in_dim = in_dim;
    p.classes = classes;
    auto rng = named_stream(seed, 100);
    p.w1 = init_uniform(static_cast<std::size_t>(classes) * in_dim, in_dim, rng);
    p.b1.assign(static_cast<std::size_t>(classes), 0.0);
    return p;
}

ModelParams ModelParams::make_mlp(int in_dim, int hidden_dim, int classes,
                                  std::uint64_t seed) {
    ModelParams p;
    p.arch = Arch::Mlp;
    p.in_dim = in_dim;
    p.hidden_dim = hidden_dim;
    p.classes = classes;
    auto rng = named_stream(seed, 100);
    p.w1 = init_uniform(static_cast<std::size_t>(hidden_dim) * in_dim, in_dim, rng);
    p.b1.assign(static_cast<std::size_t>(hidden_dim), 0.0);
    p.w2 = init_uniform(static_cast<std::size_t>(classes) * hidden_dim, hidden_dim, rng);
    p.b2.assign(static_cast<std::size_t>(classes), 0.0);
    return p;
}

Gradients Gradients::zeros_like(const ModelParams& params) {
    Gradients g;
    g.w1.assign(params.w1.size(), 0.0);
    g.b1.assign(params.b1.size(), 0.0);
    g.w2.assign(params.w2.size(), 0.0);
    g.b2.assign(params.b2.size(), 0.0);
    return g;
}

void Gradients::accumulate(const Gradients& g, double weight) {
    auto add = [weight](Vec& dst, const Vec& src) {
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += weight * src[i];
    };
    add(w1, g.w1);
    add(b1, g.b1);
    add(w2, g.w2);
    add(b2, g.b2);
}

void Gradients::scale(double s) {
    for (double& v : w1) v *= s;
    for (double& v : b1) v *= s;
    for (double& v : w2) v *= s;
    for (double& v : b2) v *= s;
}

Vec forward(const ModelParams& params, const Vec& features) {
    check_input(params, features);
    if (params.arch == Arch::Linear) {
        return softmax(affine(params.w1, params.b1, features));
    }
    Vec hidden = affine(params.w1, params.b1, features);
    for (double& v : hidden) v = std::max(v, 0.0);
    return softmax(affine(params.w2, params.b2, hidden));
}

double pll_loss(const Vec& p, const Vec& w) {
    if (p.size() != w.size()) throw std::invalid_argument("pll_loss: size mismatch");
    double loss = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (w[i] != 0.0) loss -= w[i] * std::log(std::max(p[i], 1e-30));
    }
    return loss;
}

Gradients backward(const ModelParams& params, const Vec& features, const Vec& w) {
    check_input(params, features);
    if (static_cast<int>(w.size()) != params.classes)
        throw std::invalid_argument("backward: target size mismatch");

    Gradients g = Gradients::zeros_like(params);
    if (params.arch == Arch::Linear) {
        Vec p = softmax(affine(params.w1, params.b1, features));
        std::size_t cols = features.size();
        for (std::size_t r = 0; r < p.size(); ++r) {
            double dlogit = p[r] - w[r];
            g.b1[r] = dlogit;
            for (std::size_t c = 0; c < cols; ++c) g.w1[r * cols + c] = dlogit * features[c];
        }
        return g;
    }

    Vec pre = affine(params.w1, params.b1, features);
    Vec hidden = pre;
    for (double& v : hidden) v = std::max(v, 0.0);
    Vec p = softmax(affine(params.w2, params.b2, hidden));

    std::size_t h = hidden.size();
    Vec dhidden(h, 0.0);
    for (std::size_t r = 0; r < p.size(); ++r) {
        double dlogit = p[r] - w[r];
        g.b2[r] = dlogit;
        for (std::size_t c = 0; c < h; ++c) {
            g.w2[r * h + c] = dlogit * hidden[c];
            dhidden[c] += params.w2[r * h + c] * dlogit;
        }
    }
    std::size_t cols = features.size();
    for (std::size_t r = 0; r < h; ++r) {
        double dpre = pre[r] > 0.0 ? dhidden[r] : 0.0;
        g.b1[r] = dpre;
        for (std::size_t c = 0; c < cols; ++c) g.w1[r * cols + c] = dpre * features[c];
    }
    return g;
}

OptimizerState OptimizerState::make(const ModelParams& params, double base_lr,
                                    double momentum, double weight_decay,
                                    int total_epochs) {
    OptimizerState s;
    s.velocity = Gradients::zeros_like(params);
    s.base_lr = base_lr;
    s.momentum = momentum;
    s.weight_decay = weight_decay;
    s.total_epochs = total_epochs;
    return s;
}

double OptimizerState::learning_rate() const {
    double frac = static_cast<double>(epoch) / static_cast<double>(total_epochs);
    return base_lr * 0.5 * (1.0 + std::cos(std::numbers::pi * frac));
}

void sgd_step(ModelParams& params, const Gradients& grads, OptimizerState& state) {
    double lr = state.learning_rate();
    auto update = [&](Vec& theta, const Vec& g, Vec& v) {
        if (theta.size() != g.size() || theta.size() != v.size())
            throw std::invalid_argument("sgd_step: shape mismatch");
        for (std::size_t i = 0; i < theta.size(); ++i) {
            v[i] = state.momentum * v[i] + g[i] + state.weight_decay * theta[i];
            theta[i] -= lr * v[i];
        }
    };
    update(params.w1, grads.w1, state.velocity.w1);
    update(params.b1, grads.b1, state.velocity.b1);
    update(params.w2, grads.w2, state.velocity.w2);
    update(params.b2, grads.b2, state.velocity.b2);
}

void save_checkpoint(const ModelParams& params, const std::string& path) {
    nlohmann::json j;
    j["arch"] = params.arch == Arch::Linear ? "linear" : "mlp";
    j["in_dim"] = params.in_dim;
    j["hidden_dim"] = params.hidden_dim;
    j["classes"] = params.classes;
    j["w1"] = params.w1;
    j["b1"] = params.b1;
    j["w2"] = params.w2;
    j["b2"] = params.b2;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
    out << j.dump() << "\n";
}

ModelParams load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
    nlohmann::json j;
    in >> j;
    ModelParams p;
    p.arch = j.at("arch") == "linear" ? Arch::Linear : Arch::Mlp;
    p.in_dim = j.at("in_dim");
    p.hidden_dim = j.at("hidden_dim");
    p.classes = j.at("classes");
    p.w1 = j.at("w1").get<Vec>();
    p.b1 = j.at("b1").get<Vec>();
    p.w2 = j.at("w2").get<Vec>();
    p.b2 = j.at("b2").get<Vec>();
    return p;
}

}  // namespace alim
