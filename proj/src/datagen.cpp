#include "alim/datagen.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "alim/rng.hpp"

namespace alim {

std::vector<LabeledPoint> make_gaussian_blobs(int n, int c, int d, double spread,
                                              std::uint64_t seed) {
    if (c < 2) throw std::invalid_argument("make_gaussian_blobs: need c >= 2");
    if (n < c) throw std::invalid_argument("make_gaussian_blobs: need n >= c");
    if (d < 1) throw std::invalid_argument("make_gaussian_blobs: need d >= 1");
    if (!(spread > 0.0)) throw std::invalid_argument("make_gaussian_blobs: spread must be positive");

    // Class means on the unit circle in the first two coordinates (distinct
    // for any c); for d == 1 the means sit at the cosine projections, which
    // can collide, so fall back to evenly spaced points on a line.
    std::vector<Vec> means(static_cast<std::size_t>(c), Vec(static_cast<std::size_t>(d), 0.0));
    for (int k = 0; k < c; ++k) {
        double theta = 2.0 * std::numbers::pi * k / c;
        if (d >= 2) {
            means[k][0] = std::cos(theta);
            means[k][1] = std::sin(theta);
        } else {
            means[k][0] = static_cast<double>(k);
        }
    }

    std::vector<LabeledPoint> points;
    points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        int label = i % c;  // class-balanced up to rounding
        auto rng = substream(seed, static_cast<std::uint64_t>(i));
        std::normal_distribution<double> gauss(0.0, spread);
        LabeledPoint pt;
        pt.truth = label;
        pt.features.resize(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) {
            pt.features[j] = means[label][j] + gauss(rng);
        }
        points.push_back(std::move(pt));
    }
    return points;
}

std::vector<PartialSample> corrupt(const std::vector<LabeledPoint>& points,
                                   const CorruptionSpec& spec) {
    if (spec.c < 2) throw std::invalid_argument("corrupt: need c >= 2");
    if (spec.q < 0.0 || spec.q > 1.0) throw std::invalid_argument("corrupt: q must be in [0,1]");
    if (spec.eta < 0.0 || spec.eta > 1.0) throw std::invalid_argument("corrupt: eta must be in [0,1]");
    for (const auto& pt : points) {
        if (pt.truth < 0 || pt.truth >= spec.c)
            throw std::invalid_argument("corrupt: truth out of range");
    }

    std::vector<PartialSample> samples;
    samples.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& pt = points[i];
        auto rng = substream(spec.seed, i);
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        PartialSample s;
        s.features = pt.features;
        s.truth = pt.truth;
        s.is_noisy = false;
        s.candidates.assign(static_cast<std::size_t>(spec.c), 0);
        for (int k = 0; k < spec.c; ++k) {
            if (k == pt.truth) continue;
            if (unit(rng) < spec.q) s.candidates[k] = 1;
        }
        s.candidates[pt.truth] = 1;

        if (unit(rng) < spec.eta) {
            std::vector<int> non_candidates;
            for (int k = 0; k < spec.c; ++k) {
                if (!s.candidates[k]) non_candidates.push_back(k);
            }
            // Full candidate set: the swap is undefined, keep the sample clean.
            if (!non_candidates.empty()) {
                std::uniform_int_distribution<std::size_t> pick(0, non_candidates.size() - 1);
                s.candidates[non_candidates[pick(rng)]] = 1;
                s.candidates[pt.truth] = 0;
                s.is_noisy = true;
            }
        }
        samples.push_back(std::move(s));
    }
    return samples;
}

CorpusStats validate_corpus(const std::vector<PartialSample>& samples,
                            const CorruptionSpec& spec) {
    if (samples.empty()) throw std::invalid_argument("validate_corpus: empty corpus");
    CorpusStats stats;
    stats.n = samples.size();
    stats.per_class_counts.assign(static_cast<std::size_t>(spec.c), 0);
    double size_sum = 0.0;
    std::size_t noisy = 0;
    for (const auto& s : samples) {
        if (!s.truth) throw std::invalid_argument("validate_corpus: sample lacks truth");
        stats.per_class_counts.at(static_cast<std::size_t>(*s.truth))++;
        std::size_t sz = 0;
        for (auto v : s.candidates) sz += v;
        size_sum += static_cast<double>(sz);
        if (s.is_noisy && *s.is_noisy) ++noisy;
    }
    double n = static_cast<double>(stats.n);
    stats.mean_candidate_size = size_sum / n;
    stats.noise_fraction = static_cast<double>(noisy) / n;
    // The noisy swap keeps the set size constant, so the expectation matches
    // the clean-sample binomial mean.
    stats.expected_candidate_size = 1.0 + spec.q * (spec.c - 1);
    stats.candidate_size_sigma = std::sqrt((spec.c - 1) * spec.q * (1.0 - spec.q) / n);
    stats.expected_noise_fraction = spec.eta;
    stats.noise_fraction_sigma = std::sqrt(spec.eta * (1.0 - spec.eta) / n);
    stats.candidate_size_ok =
        std::abs(stats.mean_candidate_size - stats.expected_candidate_size) <=
        3.0 * stats.candidate_size_sigma + 1e-12;
    stats.noise_fraction_ok =
        std::abs(stats.noise_fraction - stats.expected_noise_fraction) <=
        3.0 * stats.noise_fraction_sigma + 1e-12;
    return stats;
}

}  // namespace alim
