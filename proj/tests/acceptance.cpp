// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier criteria share their training runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "alim/adaptive_lambda.hpp"
#include "alim/alim_core.hpp"
#include "alim/datagen.hpp"
#include "alim/model.hpp"
#include "alim/oracle.hpp"
#include "alim/rng.hpp"
#include "alim/trainer.hpp"
#include "test_helpers.hpp"

using namespace alim;
using alim::testing::max_abs_diff;
using alim::testing::random_mask;
using alim::testing::random_simplex;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

// ---- criterion 1: Scale closed form vs grid oracle ---------------------

void criterion_1() {
    auto start = std::chrono::steady_clock::now();
    auto rng = substream(1001, 0);
    double worst_label = 0.0, worst_obj = 0.0;
    int instances = 0;
    for (int c : {2, 3, 4}) {
        for (double k : {0.5, 1.0, 2.0}) {
            for (double lambda : {0.1, 0.5, 0.9}) {
                for (int rep = 0; rep < 4; ++rep) {
                    Vec p = random_simplex(c, rng);
                    Mask s = random_mask(c, rng);
                    double m = -std::log(lambda);
                    Vec closed = closed_form_scale(p, s, m, k);
                    Vec grid = brute_force_argmax(p, s, m, k, 1e-3);
                    worst_label = std::max(worst_label, max_abs_diff(closed, grid));
                    worst_obj = std::max(worst_obj,
                                         std::abs(objective_value(closed, p, s, m, k) -
                                                  objective_value(grid, p, s, m, k)));
                    ++instances;
                }
            }
        }
    }
    auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = instances >= 100 && worst_label < 1e-2 && worst_obj < 1e-2 && secs < 120.0;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "Scale closed form vs grid oracle: %d instances, max label dev %.2e, "
                  "max objective dev %.2e, %.1fs",
                  instances, worst_label, worst_obj, secs);
    report(1, ok, buf);
}

// ---- criterion 2: Onehot vertex oracle --------------------------------

void criterion_2() {
    auto rng = substream(1002, 0);
    std::uniform_real_distribution<double> m_dist(0.05, 4.0);
    int agree = 0, total = 0;
    while (total < 1000) {
        int c = 2 + total % 3;
        Vec p = random_simplex(c, rng);
        Mask s = random_mask(c, rng);
        double m = m_dist(rng);

        // vertex-exhaustive oracle for the K=0 objective
        int best_vertex = 0;
        double best_value = -1e300;
        bool unique = true;
        for (int i = 0; i < c; ++i) {
            Vec vertex(static_cast<std::size_t>(c), 0.0);
            vertex[i] = 1.0;
            double v = objective_value(vertex, p, s, m, 0.0);
            if (v > best_value + 1e-12) {
                best_value = v;
                best_vertex = i;
                unique = true;
            } else if (v > best_value - 1e-12) {
                unique = false;
            }
        }
        if (!unique) continue;  // criterion covers unique-maximum instances

        Vec closed = closed_form_onehot(p, s, m);
        int closed_index = 0;
        for (int i = 0; i < c; ++i) {
            if (closed[i] == 1.0) closed_index = i;
        }
        if (closed_index == best_vertex) ++agree;
        ++total;
    }
    bool ok = agree == total;
    report(2, ok, "Onehot KKT vertex oracle: " + std::to_string(agree) + "/" +
                      std::to_string(total) + " index agreement");
}

// ---- criterion 3: RC degeneration -------------------------------------

void criterion_3() {
    auto reports = verify_rc_degeneration(1000, 1003);
    double worst = 0.0;
    for (const auto& r : reports) worst = std::max(worst, r.max_abs_deviation);
    bool formula_ok = worst < 1e-15;

    // Fixed lambda=0 training vs the dedicated RC code path on one seed
    auto pts = make_gaussian_blobs(300, 4, 2, 0.45, 30);
    auto test_pts = make_gaussian_blobs(100, 4, 2, 0.45, 31);
    CorruptionSpec spec{4, 0.3, 0.3, 32};
    auto train = corrupt(pts, spec);
    auto test = corrupt(test_pts, spec);
    TrainConfig cfg;
    cfg.epochs = 12;
    cfg.warmup_epochs = 4;
    cfg.lambda_policy = LambdaPolicy::fixed(0.0);
    cfg.norm = Normalization::scale(1.0);
    cfg.seed = 33;
    ModelParams m1 = ModelParams::make_mlp(2, 8, 4, cfg.seed);
    auto a = run_experiment(train, test, cfg, m1);
    TrainConfig rc_cfg = cfg;
    rc_cfg.rc_reference = true;
    ModelParams m2 = ModelParams::make_mlp(2, 8, 4, cfg.seed);
    auto b = run_experiment(train, test, rc_cfg, m2);
    bool trajectory_ok = m1.w1 == m2.w1 && m1.w2 == m2.w2;
    for (std::size_t i = 0; i < a.size(); ++i) {
        trajectory_ok = trajectory_ok && a[i].mean_loss == b[i].mean_loss &&
                        a[i].test_accuracy == b[i].test_accuracy;
    }

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "RC degeneration: max formula dev %.2e over 1000 trials, "
                  "lambda=0 trajectory %s RC path",
                  worst, trajectory_ok ? "identical to" : "DIFFERS from");
    report(3, formula_ok && trajectory_ok, buf);
}

// ---- criterion 4: quantile property -----------------------------------

void criterion_4() {
    auto rng = substream(1004, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = 1000, c = 4;
    std::vector<PartialSample> corpus(n);
    std::vector<Vec> probs(n);
    for (int i = 0; i < n; ++i) {
        bool noisy = unit(rng) < 0.35;
        Mask s(c, 0);
        int truth = i % c;
        s[truth] = 1;
        if (unit(rng) < 0.4) s[(truth + 1) % c] = 1;
        Vec p = random_simplex(c, rng);
        int target = noisy ? (truth + 2) % c : truth;
        p[target] += 3.0 * unit(rng) + 0.5;
        double sum = 0.0;
        for (double v : p) sum += v;
        for (double& v : p) v /= sum;
        corpus[i].candidates = s;
        probs[i] = p;
    }
    bool ok = true;
    std::string detail = "quantile property at N=1000:";
    for (double eta : {0.1, 0.2, 0.3}) {
        auto r = verify_quantile_logic(probs, corpus, eta);
        ok = ok && r.fraction_ok && r.equivalence_ok;
        char buf[96];
        std::snprintf(buf, sizeof(buf), " eta=%.1f flagged=%.3f mismatches=%zu;", eta,
                      r.flagged_fraction, r.equivalence_mismatches);
        detail += buf;
    }
    report(4, ok, detail);
}

// ---- criterion 5: gradient correctness --------------------------------

double finite_difference_worst(ModelParams model, const Vec& x, const Vec& w) {
    const double h = 1e-5;
    Gradients analytic = backward(model, x, w);
    std::vector<double> flat;
    for (const auto* vec : {&analytic.w1, &analytic.b1, &analytic.w2, &analytic.b2})
        flat.insert(flat.end(), vec->begin(), vec->end());
    std::vector<double*> view;
    for (auto* vec : {&model.w1, &model.b1, &model.w2, &model.b2})
        for (double& v : *vec) view.push_back(&v);
    double worst = 0.0;
    for (std::size_t i = 0; i < view.size(); ++i) {
        double saved = *view[i];
        *view[i] = saved + h;
        double up = pll_loss(forward(model, x), w);
        *view[i] = saved - h;
        double down = pll_loss(forward(model, x), w);
        *view[i] = saved;
        double numeric = (up - down) / (2 * h);
        double denom = std::max({std::abs(numeric), std::abs(flat[i]), 1e-6});
        worst = std::max(worst, std::abs(numeric - flat[i]) / denom);
    }
    return worst;
}

void criterion_5() {
    auto rng = substream(1005, 0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        ModelParams model = t % 2 ? ModelParams::make_mlp(3, 6, 4, 2000 + t)
                                  : ModelParams::make_linear(3, 4, 2000 + t);
        Vec x = {unit(rng), unit(rng), unit(rng)};
        Vec w = random_simplex(4, rng);
        worst = std::max(worst, finite_difference_worst(model, x, w));
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "analytic vs central-difference gradients: max rel err %.2e over 100 configs",
                  worst);
    report(5, worst < 1e-4, buf);
}

// ---- criterion 6: data-generation statistics --------------------------

void criterion_6() {
    const int n = 20000, c = 10;
    const double q = 0.3, eta = 0.3;
    auto pts = make_gaussian_blobs(n, c, 2, 0.5, 1006);
    CorruptionSpec spec{c, q, eta, 1007};
    auto stats = validate_corpus(corrupt(pts, spec), spec);
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "corruption stats: mean size %.3f vs %.1f (sigma %.4f), noise %.4f vs %.1f "
                  "(sigma %.4f)",
                  stats.mean_candidate_size, stats.expected_candidate_size,
                  stats.candidate_size_sigma, stats.noise_fraction,
                  stats.expected_noise_fraction, stats.noise_fraction_sigma);
    report(6, stats.candidate_size_ok && stats.noise_fraction_ok, buf);
}

// ---- criteria 7-9: desk-scale experiment ------------------------------

struct DeskRun {
    double final_accuracy = 0.0;
    std::vector<EpochMetrics> metrics;
};

DeskRun desk_run(std::uint64_t seed, const LambdaPolicy& policy) {
    const double spread = 0.55;
    auto train_pts = make_gaussian_blobs(4000, 4, 2, spread, seed);
    auto test_pts = make_gaussian_blobs(1000, 4, 2, spread, seed + 500);
    CorruptionSpec spec{4, 0.3, 0.3, seed + 1};
    CorruptionSpec test_spec{4, 0.3, 0.3, seed + 501};
    auto train = corrupt(train_pts, spec);
    auto test = corrupt(test_pts, test_spec);

    TrainConfig cfg;
    cfg.epochs = 200;
    cfg.warmup_epochs = 80;
    cfg.batch_size = 64;
    cfg.lambda_policy = policy;
    cfg.norm = Normalization::scale(1.0);
    cfg.mixup = true;
    cfg.seed = seed;
    ModelParams model = ModelParams::make_mlp(2, 32, 4, cfg.seed);
    DeskRun run;
    run.metrics = run_experiment(train, test, cfg, model);
    run.final_accuracy = run.metrics.back().test_accuracy;
    return run;
}

void criteria_7_8_9() {
    const std::vector<std::uint64_t> seeds = {11, 22, 33};
    const std::vector<double> fixed_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.7};

    auto start = std::chrono::steady_clock::now();
    double adaptive_acc = 0.0, rc_acc = 0.0;
    double auc_tail = 0.0;
    int auc_count = 0;
    for (auto seed : seeds) {
        DeskRun adaptive = desk_run(seed, LambdaPolicy::adaptive(0.3));
        DeskRun rc = desk_run(seed, LambdaPolicy::fixed(0.0));
        adaptive_acc += adaptive.final_accuracy;
        rc_acc += rc.final_accuracy;
        for (const auto& m : adaptive.metrics) {
            if (m.epoch >= 80 + 40) {
                auc_tail += m.separation_auc;
                ++auc_count;
            }
        }
    }
    adaptive_acc /= seeds.size();
    rc_acc /= seeds.size();
    auc_tail /= auc_count;
    double per_run_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() /
        (2.0 * seeds.size());

    // the margin is corpus-dependent; the bar is the ordering plus runtime
    char buf7[192];
    std::snprintf(buf7, sizeof(buf7),
                  "noise robustness ordering: ALIM-adaptive %.4f > RC %.4f "
                  "(margin %.2f pp), %.1fs per run",
                  adaptive_acc, rc_acc, 100.0 * (adaptive_acc - rc_acc), per_run_secs);
    report(7, adaptive_acc > rc_acc && per_run_secs < 600.0, buf7);

    char buf8[128];
    std::snprintf(buf8, sizeof(buf8),
                  "separation diagnostic: mean clean/noisy ratio AUC %.4f over epochs >= 120",
                  auc_tail);
    report(8, auc_tail > 0.7, buf8);

    double best_fixed = 0.0;
    std::string grid_detail;
    for (double lambda : fixed_grid) {
        double acc = 0.0;
        for (auto seed : seeds) acc += desk_run(seed, LambdaPolicy::fixed(lambda)).final_accuracy;
        acc /= seeds.size();
        best_fixed = std::max(best_fixed, acc);
        char buf[48];
        std::snprintf(buf, sizeof(buf), " %.1f:%.4f", lambda, acc);
        grid_detail += buf;
    }
    char buf9[256];
    std::snprintf(buf9, sizeof(buf9),
                  "manual vs adaptive lambda: adaptive %.4f, best fixed %.4f (grid%s)",
                  adaptive_acc, best_fixed, grid_detail.c_str());
    report(9, adaptive_acc >= best_fixed - 0.02, buf9);
}

// ---- criterion 10: simplex + Beta property suite ----------------------

void criterion_10() {
    auto rng = substream(1010, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> feat(-2.0, 2.0);
    bool ok = true;
    for (int t = 0; t < 10000 && ok; ++t) {
        int c = 2 + t % 4;
        Vec p = random_simplex(c, rng);
        Mask s = random_mask(c, rng);
        double lambda = unit(rng);
        Normalization norm = t % 3 == 0 ? Normalization::onehot()
                                        : Normalization::scale(0.25 + 2.0 * unit(rng));
        ok = ok && is_probability_vector(alim_pseudo_label(p, s, lambda, norm), 1e-9);

        Vec w2 = random_simplex(c, rng);
        auto [xm, wm] = mixup_pair({feat(rng), feat(rng)}, p, {feat(rng), feat(rng)}, w2,
                                   sample_mix_alpha(4.0, rng));
        ok = ok && is_probability_vector(wm, 1e-9);

        if (t % 10 == 0) {
            ModelParams model = ModelParams::make_mlp(2, 5, c, 3000 + t);
            ok = ok && is_probability_vector(forward(model, {feat(rng), feat(rng)}), 1e-9);
        }
    }

    auto beta_rng = substream(1010, 1);
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) sum += sample_mix_alpha(1.0, beta_rng);
    double beta_mean = sum / 10000.0;
    bool beta_ok = std::abs(beta_mean - 0.5) < 0.02;

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "simplex invariants over 10000 cases %s; Beta(1,1) mean %.4f",
                  ok ? "hold" : "VIOLATED", beta_mean);
    report(10, ok && beta_ok, buf);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criteria_7_8_9();
    criterion_10();
    if (g_failures > 0) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 2;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
