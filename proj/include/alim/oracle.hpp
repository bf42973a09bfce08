#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alim/types.hpp"

namespace alim {

struct OracleReport {
    std::string descriptor;
    Vec oracle_label;
    double oracle_objective = 0.0;
    Vec closed_form_label;
    double closed_form_objective = 0.0;
    double max_abs_deviation = 0.0;
};

// sum_i w_i log P_i + M (sum_i w_i S_i - 1) - K sum_i w_i log w_i,
// with 0*log 0 = 0.
double objective_value(const Vec& w, const Vec& p, const Mask& candidates,
                       double penalty_m, double penalty_k);

// Exhaustive maximizer of the objective over the simplex grid with the given
// step; c <= 4 only. For K = 0 the simplex vertices decide (linear objective).
Vec brute_force_argmax(const Vec& p, const Mask& candidates, double penalty_m,
                       double penalty_k, double resolution);

// lambda=0 Scale K=1 pseudo-labels against the classic-PLL formula on random
// instances; deviations are exact up to floating rounding.
std::vector<OracleReport> verify_rc_degeneration(int trials, std::uint64_t seed);

struct QuantileReport {
    double lambda = 0.0;
    double eta = 0.0;
    std::size_t n = 0;
    std::size_t flagged = 0;          // ratio <= lambda
    double flagged_fraction = 0.0;
    std::size_t equivalence_mismatches = 0;  // ratio<=lambda vs Onehot leaves S
    bool fraction_ok = false;         // |fraction - eta| <= 1/N
    bool equivalence_ok = false;
};

// Checks the quantile equivalence chain sample by sample: ratio(x) <= lambda
// iff the Onehot pseudo-label at that lambda selects a non-candidate index
// (exact ties count as flagged, consistent with the lowest-index tie-break).
QuantileReport verify_quantile_logic(const std::vector<Vec>& probs,
                                     const std::vector<PartialSample>& corpus,
                                     double eta);

}  // namespace alim
