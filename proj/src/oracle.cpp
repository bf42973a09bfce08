#include "alim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "alim/adaptive_lambda.hpp"
#include "alim/alim_core.hpp"
#include "alim/rng.hpp"

namespace alim {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double max_abs_diff(const Vec& a, const Vec& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

Vec random_simplex(int c, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vec p(static_cast<std::size_t>(c));
    double sum = 0.0;
    for (double& v : p) {
        v = -std::log(std::max(unit(rng), 1e-300));  // exponential spacings
        sum += v;
    }
    for (double& v : p) v /= sum;
    return p;
}

Mask random_mask(int c, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Mask s(static_cast<std::size_t>(c), 0);
    bool any = false;
    for (auto& v : s) {
        v = unit(rng) < 0.5 ? 1 : 0;
        any = any || v;
    }
    if (!any) s[std::uniform_int_distribution<int>(0, c - 1)(rng)] = 1;
    return s;
}

}  // namespace

double objective_value(const Vec& w, const Vec& p, const Mask& candidates,
                       double penalty_m, double penalty_k) {
    if (w.size() != p.size() || w.size() != candidates.size())
        throw std::invalid_argument("objective_value: size mismatch");
    double value = -penalty_m;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] != 0.0) value += w[i] * std::log(std::max(p[i], 1e-300));
        if (candidates[i]) value += penalty_m * w[i];
        value -= penalty_k * xlogx(w[i]);
    }
    return value;
}

Vec brute_force_argmax(const Vec& p, const Mask& candidates, double penalty_m,
                       double penalty_k, double resolution) {
    std::size_t c = p.size();
    if (c > 4) throw std::invalid_argument("brute_force_argmax: too many classes (c > 4)");
    if (c < 2) throw std::invalid_argument("brute_force_argmax: need c >= 2");
    if (!(resolution > 0.0 && resolution <= 1e-2 + 1e-15))
        throw std::invalid_argument("brute_force_argmax: resolution must be in (0, 1e-2]");

    auto steps = static_cast<std::size_t>(std::llround(1.0 / resolution));
    double step = 1.0 / static_cast<double>(steps);

    // Per-coordinate contribution g_i[j] at w_i = j*step; the grid objective
    // is then a sum of table lookups.
    std::vector<Vec> table(c, Vec(steps + 1));
    for (std::size_t i = 0; i < c; ++i) {
        double coef = std::log(std::max(p[i], 1e-300)) + (candidates[i] ? penalty_m : 0.0);
        for (std::size_t j = 0; j <= steps; ++j) {
            double wi = static_cast<double>(j) * step;
            table[i][j] = coef * wi - penalty_k * xlogx(wi);
        }
    }

    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_idx(c, 0);
    auto consider = [&](const std::vector<std::size_t>& idx, double value) {
        if (value > best) {
            best = value;
            best_idx = idx;
        }
    };

    std::vector<std::size_t> idx(c, 0);
    if (c == 2) {
        for (std::size_t j0 = 0; j0 <= steps; ++j0) {
            idx = {j0, steps - j0};
            consider(idx, table[0][j0] + table[1][steps - j0]);
        }
    } else if (c == 3) {
        for (std::size_t j0 = 0; j0 <= steps; ++j0) {
            double a0 = table[0][j0];
            for (std::size_t j1 = 0; j1 + j0 <= steps; ++j1) {
                std::size_t j2 = steps - j0 - j1;
                double v = a0 + table[1][j1] + table[2][j2];
                if (v > best) {
                    best = v;
                    best_idx = {j0, j1, j2};
                }
            }
        }
    } else {
        const double* t2 = table[2].data();
        const double* t3 = table[3].data();
        for (std::size_t j0 = 0; j0 <= steps; ++j0) {
            double a0 = table[0][j0];
            for (std::size_t j1 = 0; j1 + j0 <= steps; ++j1) {
                double a1 = a0 + table[1][j1];
                std::size_t rem = steps - j0 - j1;
                double local_best = -std::numeric_limits<double>::infinity();
                std::size_t local_j = 0;
                for (std::size_t j2 = 0; j2 <= rem; ++j2) {
                    double v = t2[j2] + t3[rem - j2];
                    if (v > local_best) {
                        local_best = v;
                        local_j = j2;
                    }
                }
                if (a1 + local_best > best) {
                    best = a1 + local_best;
                    best_idx = {j0, j1, local_j, rem - local_j};
                }
            }
        }
    }

    // K = 0 makes the objective linear in w: the true optimum is a vertex,
    // so check them exactly as well.
    if (penalty_k == 0.0) {
        for (std::size_t i = 0; i < c; ++i) {
            std::vector<std::size_t> v_idx(c, 0);
            v_idx[i] = steps;
            double value = table[i][steps];
            consider(v_idx, value);
        }
    }

    Vec w(c);
    for (std::size_t i = 0; i < c; ++i) w[i] = static_cast<double>(best_idx[i]) * step;
    return w;
}

std::vector<OracleReport> verify_rc_degeneration(int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("verify_rc_degeneration: trials must be >= 1");
    std::vector<OracleReport> reports;
    reports.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        auto rng = substream(seed, static_cast<std::uint64_t>(t));
        int c = (t % 2 == 0) ? 3 : 10;
        Vec p = random_simplex(c, rng);
        Mask s = random_mask(c, rng);

        Vec expected = rc_pseudo_label(p, s);
        Vec actual = alim_pseudo_label(p, s, 0.0, Normalization::scale(1.0));

        OracleReport r;
        r.descriptor = "rc_degeneration trial " + std::to_string(t) + " c=" + std::to_string(c);
        r.oracle_label = expected;
        r.closed_form_label = actual;
        r.max_abs_deviation = max_abs_diff(expected, actual);
        reports.push_back(std::move(r));
    }
    return reports;
}

QuantileReport verify_quantile_logic(const std::vector<Vec>& probs,
                                     const std::vector<PartialSample>& corpus,
                                     double eta) {
    if (probs.size() != corpus.size())
        throw std::invalid_argument("verify_quantile_logic: one prediction per sample required");
    QuantileReport report;
    report.eta = eta;
    report.n = corpus.size();
    report.lambda = compute_corpus_lambda(probs, corpus, eta);

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Mask& s = corpus[i].candidates;
        const Vec& p = probs[i];
        double ratio = clean_noise_ratio(p, s);
        bool flagged = ratio <= report.lambda;
        if (flagged) ++report.flagged;

        // Does the Onehot pseudo-label at this lambda pick a non-candidate?
        // At an exact tie the lowest index wins; such samples are counted as
        // flagged, so compare the weighted maxima directly.
        double max_in = 0.0, max_out = 0.0;
        bool has_out = false;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (s[k]) {
                max_in = std::max(max_in, p[k]);
            } else {
                has_out = true;
                max_out = std::max(max_out, report.lambda * p[k]);
            }
        }
        // The quantile-defining sample sits exactly on the boundary, where the
        // division route (ratio <= lambda) and the multiplication route
        // (lambda * P vs P) can differ by one ulp; treat near-equality as the
        // tie it mathematically is.
        bool tie = std::abs(max_out - max_in) <= 1e-12 * std::max(max_in, max_out);
        bool predicts_outside = has_out && (max_out > max_in || tie);
        if (flagged != predicts_outside) ++report.equivalence_mismatches;
    }

    report.flagged_fraction =
        static_cast<double>(report.flagged) / static_cast<double>(report.n);
    report.fraction_ok = std::abs(report.flagged_fraction - eta) <=
                         1.0 / static_cast<double>(report.n) + 1e-12;
    report.equivalence_ok = report.equivalence_mismatches == 0;
    return report;
}

}  // namespace alim
