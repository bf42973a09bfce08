#include "alim/adaptive_lambda.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "alim/alim_core.hpp"

namespace alim {

double adaptive_lambda(const std::vector<double>& ratios, double eta) {
    if (ratios.empty()) throw std::invalid_argument("adaptive_lambda: empty ratio list");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("adaptive_lambda: eta must be in [0,1]");
    double n = static_cast<double>(ratios.size());
    // Small slack keeps ceil(eta*N) at the intended rank when eta*N is an
    // integer up to rounding (e.g. 0.2 * 1000).
    auto k = static_cast<std::size_t>(std::ceil(eta * n - 1e-9));
    if (k == 0) return 0.0;
    std::vector<double> sorted = ratios;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     sorted.end());
    return std::clamp(sorted[k - 1], 0.0, 1.0);
}

double compute_corpus_lambda(const std::vector<Vec>& probs,
                             const std::vector<PartialSample>& corpus,
                             double eta) {
    if (probs.size() != corpus.size())
        throw std::invalid_argument("compute_corpus_lambda: one prediction per sample required");
    std::vector<double> ratios;
    ratios.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        ratios.push_back(clean_noise_ratio(probs[i], corpus[i].candidates));
    }
    return adaptive_lambda(ratios, eta);
}

}  // namespace alim
