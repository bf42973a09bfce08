#include "alim/alim_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace alim {

namespace {

constexpr double kFloor = 1e-30;

void check_lambda(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("lambda must be in [0,1]");
}

}  // namespace

Vec weighted_mask(const Mask& candidates, double lambda) {
    if (candidates.empty()) throw std::invalid_argument("weighted_mask: empty candidates");
    check_lambda(lambda);
    Vec out(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        out[i] = candidates[i] ? 1.0 : lambda;
    }
    return out;
}

Vec scale_normalize(const Vec& z, double K) {
    if (!(K > 0.0)) throw std::invalid_argument("scale_normalize: K must be positive");
    double zmax = 0.0;
    for (double v : z) zmax = std::max(zmax, v);
    if (!(zmax > 0.0)) throw std::invalid_argument("scale_normalize: all-zero input");

    Vec out(z.size());
    if (K == 1.0) {
        // Plain normalization, kept exact for the classic-PLL degeneration.
        double sum = 0.0;
        for (double v : z) sum += v;
        for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] / sum;
        return out;
    }
    double inv_k = 1.0 / K;
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        double t = std::max(z[i], kFloor) / zmax;  // max entry maps to 1
        out[i] = std::pow(t, inv_k);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

Vec onehot_normalize(const Vec& z) {
    double zmax = 0.0;
    for (double v : z) zmax = std::max(zmax, v);
    if (!(zmax > 0.0)) throw std::invalid_argument("onehot_normalize: all-zero input");
    std::size_t best = 0;
    for (std::size_t i = 1; i < z.size(); ++i) {
        if (z[i] > z[best]) best = i;  // ties keep the lowest index
    }
    Vec out(z.size(), 0.0);
    out[best] = 1.0;
    return out;
}

Vec alim_pseudo_label(const Vec& p, const Mask& candidates, double lambda,
                      const Normalization& norm) {
    if (p.size() != candidates.size())
        throw std::invalid_argument("alim_pseudo_label: size mismatch");
    check_lambda(lambda);
    Vec z(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        z[i] = (candidates[i] ? 1.0 : lambda) * p[i];
    }
    if (norm.kind == NormKind::Onehot) return onehot_normalize(z);
    return scale_normalize(z, norm.K);
}

Vec rc_pseudo_label(const Vec& p, const Mask& candidates) {
    if (p.size() != candidates.size())
        throw std::invalid_argument("rc_pseudo_label: size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (candidates[i]) sum += p[i];
    }
    if (!(sum > 0.0)) throw std::invalid_argument("rc_pseudo_label: all-zero input");
    Vec out(p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (candidates[i]) out[i] = p[i] / sum;
    }
    return out;
}

double clean_noise_ratio(const Vec& p, const Mask& candidates) {
    if (p.size() != candidates.size())
        throw std::invalid_argument("clean_noise_ratio: size mismatch");
    double num = 0.0;
    double den = 0.0;
    bool has_non_candidate = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (candidates[i]) {
            num = std::max(num, p[i]);
        } else {
            has_non_candidate = true;
            den = std::max(den, p[i]);
        }
    }
    if (!has_non_candidate || den == 0.0)
        return std::numeric_limits<double>::infinity();
    return num / den;
}

Vec closed_form_onehot(const Vec& p, const Mask& candidates, double penalty_m) {
    if (penalty_m < 0.0) throw std::invalid_argument("closed_form_onehot: M must be >= 0");
    double lambda = std::exp(-penalty_m);
    Vec z(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        z[i] = (candidates[i] ? 1.0 : lambda) * p[i];
    }
    return onehot_normalize(z);
}

Vec closed_form_scale(const Vec& p, const Mask& candidates, double penalty_m,
                      double K) {
    if (penalty_m < 0.0) throw std::invalid_argument("closed_form_scale: M must be >= 0");
    double lambda = std::exp(-penalty_m);
    Vec z(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        z[i] = (candidates[i] ? 1.0 : lambda) * p[i];
    }
    return scale_normalize(z, K);
}

}  // namespace alim
