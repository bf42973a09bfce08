#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "alim/adaptive_lambda.hpp"
#include "alim/alim_core.hpp"
#include "alim/model.hpp"
#include "alim/types.hpp"

namespace alim {

struct TrainConfig {
    int warmup_epochs = 80;  // e0
    int epochs = 200;
    int batch_size = 64;
    LambdaPolicy lambda_policy = LambdaPolicy::fixed(0.0);
    Normalization norm = Normalization::scale(1.0);
    bool mixup = true;
    bool mixup_during_warmup = false;
    double zeta = 4.0;        // Beta(zeta, zeta) for mixup coefficients
    double lambda_mix = 1.0;  // PLL-vs-mixup loss trade-off
    double base_lr = 0.01;
    double momentum = 0.9;
    double weight_decay = 0.001;
    std::uint64_t seed = 0;
    // Reference path that always uses the classic RC pseudo-label; a
    // Fixed lambda=0 Scale K=1 run must match it trajectory-for-trajectory.
    bool rc_reference = false;
};

struct EpochMetrics {
    int epoch = 0;
    double mean_loss = 0.0;
    double test_accuracy = 0.0;
    double lambda = 0.0;
    double mean_ratio_clean = 0.0;  // over finite ratios
    double mean_ratio_noisy = 0.0;
    double separation_auc = 0.5;  // P(ratio_clean > ratio_noisy), ties half
};

// (alpha*x_i + (1-alpha)*x_j, alpha*w_i + (1-alpha)*w_j).
std::pair<Vec, Vec> mixup_pair(const Vec& x_i, const Vec& w_i, const Vec& x_j,
                               const Vec& w_j, double alpha);

double sample_mix_alpha(double zeta, std::mt19937_64& rng);

// One pass over the corpus with a fixed lambda; returns the mean joint loss
// per sample. `order_rng` drives batching order, `mix_rng` drives mixup so
// toggling mixup does not perturb the data order.
double train_epoch(ModelParams& model, OptimizerState& opt,
                   const std::vector<PartialSample>& corpus,
                   const TrainConfig& config, double lambda, int epoch,
                   std::mt19937_64& order_rng, std::mt19937_64& mix_rng);

double evaluate_accuracy(const ModelParams& model,
                         const std::vector<PartialSample>& test);

// Warm-up then ALIM epochs per the training loop: per-batch pseudo-labels,
// optional mixup, per-epoch adaptive lambda from the eta-quantile of the
// clean/noise ratios. Deterministic given config.seed.
std::vector<EpochMetrics> run_experiment(const std::vector<PartialSample>& train,
                                         const std::vector<PartialSample>& test,
                                         const TrainConfig& config,
                                         ModelParams& model);

}  // namespace alim
