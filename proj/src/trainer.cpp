#include "alim/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "alim/rng.hpp"

namespace alim {

namespace {

// Mann-Whitney AUC of ratio separating clean (expected high) from noisy
// (expected low); ties contribute half.
double separation_auc(const std::vector<double>& clean,
                      const std::vector<double>& noisy) {
    if (clean.empty() || noisy.empty()) return 0.5;
    double wins = 0.0;
    std::vector<double> sorted_noisy = noisy;
    std::sort(sorted_noisy.begin(), sorted_noisy.end());
    for (double r : clean) {
        auto lo = std::lower_bound(sorted_noisy.begin(), sorted_noisy.end(), r);
        auto hi = std::upper_bound(sorted_noisy.begin(), sorted_noisy.end(), r);
        wins += static_cast<double>(lo - sorted_noisy.begin());
        wins += 0.5 * static_cast<double>(hi - lo);
    }
    return wins / (static_cast<double>(clean.size()) * static_cast<double>(noisy.size()));
}

double finite_mean(const std::vector<double>& values) {
    double sum = 0.0;
    std::size_t count = 0;
    for (double v : values) {
        if (std::isfinite(v)) {
            sum += v;
            ++count;
        }
    }
    return count ? sum / static_cast<double>(count) : 0.0;
}

}  // namespace

std::pair<Vec, Vec> mixup_pair(const Vec& x_i, const Vec& w_i, const Vec& x_j,
                               const Vec& w_j, double alpha) {
    if (x_i.size() != x_j.size() || w_i.size() != w_j.size())
        throw std::invalid_argument("mixup_pair: shape mismatch");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("mixup_pair: alpha must be in [0,1]");
    Vec x(x_i.size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = alpha * x_i[k] + (1.0 - alpha) * x_j[k];
    Vec w(w_i.size());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = alpha * w_i[k] + (1.0 - alpha) * w_j[k];
    return {std::move(x), std::move(w)};
}

double sample_mix_alpha(double zeta, std::mt19937_64& rng) {
    if (!(zeta > 0.0)) throw std::invalid_argument("sample_mix_alpha: zeta must be positive");
    std::gamma_distribution<double> gamma(zeta, 1.0);
    double a = gamma(rng);
    double b = gamma(rng);
    if (a + b == 0.0) return 0.5;
    return a / (a + b);
}

double train_epoch(ModelParams& model, OptimizerState& opt,
                   const std::vector<PartialSample>& corpus,
                   const TrainConfig& config, double lambda, int epoch,
                   std::mt19937_64& order_rng, std::mt19937_64& mix_rng) {
    if (corpus.empty()) throw std::invalid_argument("train_epoch: empty corpus");
    opt.epoch = epoch;

    bool warmup = epoch < config.warmup_epochs;
    bool use_rc = warmup || config.rc_reference;
    bool mix_active = config.mixup && config.lambda_mix > 0.0 &&
                      (!warmup || config.mixup_during_warmup);

    std::vector<std::size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), order_rng);

    double loss_sum = 0.0;
    std::size_t loss_count = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
        std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
        std::size_t batch = end - start;

        Gradients grads = Gradients::zeros_like(model);
        std::vector<Vec> targets(batch);
        double batch_loss = 0.0;
        for (std::size_t k = 0; k < batch; ++k) {
            const auto& s = corpus[order[start + k]];
            Vec p = forward(model, s.features);
            targets[k] = use_rc ? rc_pseudo_label(p, s.candidates)
                                : alim_pseudo_label(p, s.candidates, lambda, config.norm);
            batch_loss += pll_loss(p, targets[k]);
            grads.accumulate(backward(model, s.features, targets[k]));
        }

        if (mix_active) {
            std::vector<std::size_t> partner(batch);
            std::iota(partner.begin(), partner.end(), 0);
            std::shuffle(partner.begin(), partner.end(), mix_rng);
            double mix_loss = 0.0;
            for (std::size_t k = 0; k < batch; ++k) {
                const auto& a = corpus[order[start + k]];
                const auto& b = corpus[order[start + partner[k]]];
                double alpha = sample_mix_alpha(config.zeta, mix_rng);
                auto [x_mix, w_mix] =
                    mixup_pair(a.features, targets[k], b.features, targets[partner[k]], alpha);
                Vec p_mix = forward(model, x_mix);
                mix_loss += pll_loss(p_mix, w_mix);
                grads.accumulate(backward(model, x_mix, w_mix), config.lambda_mix);
            }
            batch_loss += config.lambda_mix * mix_loss;
        }

        grads.scale(1.0 / static_cast<double>(batch));
        sgd_step(model, grads, opt);
        loss_sum += batch_loss;
        loss_count += batch;
    }
    return loss_sum / static_cast<double>(loss_count);
}

double evaluate_accuracy(const ModelParams& model,
                         const std::vector<PartialSample>& test) {
    if (test.empty()) throw std::invalid_argument("evaluate_accuracy: empty test set");
    std::size_t correct = 0;
    for (const auto& s : test) {
        if (!s.truth) throw std::invalid_argument("evaluate_accuracy: test sample lacks truth");
        Vec p = forward(model, s.features);
        std::size_t best = 0;
        for (std::size_t i = 1; i < p.size(); ++i) {
            if (p[i] > p[best]) best = i;
        }
        if (static_cast<int>(best) == *s.truth) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(test.size());
}

std::vector<EpochMetrics> run_experiment(const std::vector<PartialSample>& train,
                                         const std::vector<PartialSample>& test,
                                         const TrainConfig& config,
                                         ModelParams& model) {
    if (train.empty() || test.empty())
        throw std::invalid_argument("run_experiment: empty split");
    if (config.warmup_epochs < 0 || config.warmup_epochs > config.epochs)
        throw std::invalid_argument("run_experiment: need 0 <= e0 <= epochs");

    OptimizerState opt = OptimizerState::make(model, config.base_lr, config.momentum,
                                              config.weight_decay, config.epochs);
    auto order_rng = named_stream(config.seed, 1);
    auto mix_rng = named_stream(config.seed, 2);

    bool adaptive = config.lambda_policy.mode == LambdaPolicy::Mode::Adaptive;
    double lambda = adaptive ? 0.0 : config.lambda_policy.fixed_value;

    std::vector<EpochMetrics> metrics;
    metrics.reserve(static_cast<std::size_t>(config.epochs));
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        EpochMetrics m;
        m.epoch = epoch;
        m.lambda = epoch < config.warmup_epochs ? 0.0 : lambda;
        m.mean_loss = train_epoch(model, opt, train, config, lambda, epoch, order_rng, mix_rng);
        m.test_accuracy = evaluate_accuracy(model, test);

        // End-of-epoch full-corpus pass: ratio diagnostics and, for the
        // adaptive policy, the eta-quantile lambda for the next ALIM epoch.
        std::vector<Vec> probs(train.size());
        std::vector<double> ratios(train.size());
        std::vector<double> clean_ratios, noisy_ratios;
        for (std::size_t i = 0; i < train.size(); ++i) {
            probs[i] = forward(model, train[i].features);
            ratios[i] = clean_noise_ratio(probs[i], train[i].candidates);
            if (train[i].is_noisy) {
                (*train[i].is_noisy ? noisy_ratios : clean_ratios).push_back(ratios[i]);
            }
        }
        m.mean_ratio_clean = finite_mean(clean_ratios);
        m.mean_ratio_noisy = finite_mean(noisy_ratios);
        m.separation_auc = separation_auc(clean_ratios, noisy_ratios);

        if (adaptive && epoch + 1 >= config.warmup_epochs) {
            lambda = adaptive_lambda(ratios, config.lambda_policy.eta);
        }
        metrics.push_back(m);
    }
    return metrics;
}

}  // namespace alim
