#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace alim {

using Vec = std::vector<double>;
using Mask = std::vector<std::uint8_t>;

// A clean sample before candidate-set corruption.
struct LabeledPoint {
    Vec features;
    int truth = 0;
};

// A partially labeled sample. `truth` and `is_noisy` are kept for
// evaluation only and never enter the training signal.
struct PartialSample {
    Vec features;
    Mask candidates;
    std::optional<int> truth;
    std::optional<bool> is_noisy;
};

struct CorruptionSpec {
    int c = 2;            // class count
    double q = 0.0;       // ambiguity level: flip probability per incorrect label
    double eta = 0.0;     // noise level: probability the truth is evicted
    std::uint64_t seed = 0;
};

bool is_probability_vector(const Vec& p, double tol = 1e-9);
bool is_valid_candidates(const Mask& s);

}  // namespace alim
