#pragma once

#include <vector>

#include "alim/types.hpp"

namespace alim {

struct LambdaPolicy {
    enum class Mode { Fixed, Adaptive };
    Mode mode = Mode::Fixed;
    double fixed_value = 0.0;  // active iff Fixed
    double eta = 0.0;          // active iff Adaptive: estimated noise level

    static LambdaPolicy fixed(double v) { return {Mode::Fixed, v, 0.0}; }
    static LambdaPolicy adaptive(double eta) { return {Mode::Adaptive, 0.0, eta}; }
};

// Nearest-rank eta-quantile of the ratio list: the k-th smallest value with
// k = ceil(eta*N); 0 when k = 0. Result clamped to [0,1] since lambda is a
// trust weight. +infinity ratios sort above every finite value.
double adaptive_lambda(const std::vector<double>& ratios, double eta);

// Builds the clean/noise ratio list over the corpus and takes its
// eta-quantile.
double compute_corpus_lambda(const std::vector<Vec>& probs,
                             const std::vector<PartialSample>& corpus,
                             double eta);

}  // namespace alim
