#pragma once

#include "alim/types.hpp"

namespace alim {

enum class NormKind { Onehot, Scale };

struct Normalization {
    NormKind kind = NormKind::Scale;
    double K = 1.0;  // Scale exponent, ignored for Onehot

    static Normalization onehot() { return {NormKind::Onehot, 0.0}; }
    static Normalization scale(double k) { return {NormKind::Scale, k}; }
};

// S~(x): 1 on candidates, lambda on non-candidates.
Vec weighted_mask(const Mask& candidates, double lambda);

// z_i^{1/K} / sum_j z_j^{1/K}. Entries are clamped at 1e-30 before the
// exponentiation so small K cannot zero out the whole vector. K=1 is plain
// normalization, computed exactly.
Vec scale_normalize(const Vec& z, double K);

// Indicator of the argmax, ties broken by lowest index.
Vec onehot_normalize(const Vec& z);

// w(x) = Normalize(S~(x) P(x)).
Vec alim_pseudo_label(const Vec& p, const Mask& candidates, double lambda,
                      const Normalization& norm);

// Classic PLL (RC) pseudo-label: S_i P_i / sum_j S_j P_j. Equals the
// lambda=0, Scale K=1 case bit-for-bit.
Vec rc_pseudo_label(const Vec& p, const Mask& candidates);

// max_i S_i P_i / max_i (1-S_i) P_i; +infinity when the candidate set is
// full (no noise evidence).
double clean_noise_ratio(const Vec& p, const Mask& candidates);

// Closed-form optimum of the K=0 objective: Onehot((S + e^{-M}(1-S)) P).
Vec closed_form_onehot(const Vec& p, const Mask& candidates, double penalty_m);

// Closed-form optimum of the K>0 objective:
// w_i = ((S_i + e^{-M}(1-S_i)) P_i)^{1/K} / sum_j (...)^{1/K}.
Vec closed_form_scale(const Vec& p, const Mask& candidates, double penalty_m,
                      double K);

}  // namespace alim
