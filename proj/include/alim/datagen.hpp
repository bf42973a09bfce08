#pragma once

#include <cstdint>
#include <vector>

#include "alim/types.hpp"

namespace alim {

// Per-class isotropic Gaussian blobs with means on the unit circle
// (first two coordinates). Class-balanced up to rounding, deterministic
// given seed.
std::vector<LabeledPoint> make_gaussian_blobs(int n, int c, int d, double spread,
                                              std::uint64_t seed);

// Candidate-set corruption: each incorrect label enters the candidate set
// independently with probability q, the truth is always added; then with
// probability eta the sample is made noisy by swapping one uniformly random
// non-candidate label in and the truth out. A sample whose candidate set is
// already full skips the noise step and stays clean.
std::vector<PartialSample> corrupt(const std::vector<LabeledPoint>& points,
                                   const CorruptionSpec& spec);

struct CorpusStats {
    std::size_t n = 0;
    double mean_candidate_size = 0.0;
    double expected_candidate_size = 0.0;
    double candidate_size_sigma = 0.0;  // std error of the mean
    double noise_fraction = 0.0;
    double expected_noise_fraction = 0.0;
    double noise_fraction_sigma = 0.0;
    std::vector<std::size_t> per_class_counts;
    bool candidate_size_ok = false;  // within 3 sigma
    bool noise_fraction_ok = false;
};

CorpusStats validate_corpus(const std::vector<PartialSample>& samples,
                            const CorruptionSpec& spec);

}  // namespace alim
