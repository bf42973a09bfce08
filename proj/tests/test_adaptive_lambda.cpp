#include <doctest.h>

#include <stdexcept>

#include <limits>

#include "alim/adaptive_lambda.hpp"
#include "alim/alim_core.hpp"
#include "alim/rng.hpp"
#include "test_helpers.hpp"

using namespace alim;

TEST_SUITE_BEGIN("adaptive_lambda");

TEST_CASE("nearest-rank quantile examples") {
    CHECK(adaptive_lambda({0.5, 1.2, 2.5, 4.0}, 0.25) == doctest::Approx(0.5));
    CHECK(adaptive_lambda({0.2, 0.4, 0.9, 3.0}, 0.5) == doctest::Approx(0.4));
    CHECK(adaptive_lambda({0.9, 0.1, 5.0}, 0.0) == 0.0);
    CHECK_THROWS_AS(adaptive_lambda({}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(adaptive_lambda({1.0}, 1.5), std::invalid_argument);
}

TEST_CASE("quantile clamps to [0,1]") {
    CHECK(adaptive_lambda({2.0, 3.0, 4.0}, 1.0) == 1.0);
    CHECK(adaptive_lambda({1.5}, 1.0) == 1.0);
}

TEST_CASE("compute_corpus_lambda: full candidate sets clamp to 1") {
    std::vector<PartialSample> corpus(4);
    std::vector<Vec> probs(4);
    for (auto& s : corpus) s.candidates = {1, 1, 1};
    for (auto& p : probs) p = {0.4, 0.3, 0.3};
    CHECK(compute_corpus_lambda(probs, corpus, 0.3) == 1.0);
}

TEST_CASE("compute_corpus_lambda: two-sample quantile") {
    std::vector<PartialSample> corpus(2);
    corpus[0].candidates = {1, 0};
    corpus[1].candidates = {0, 1};
    std::vector<Vec> probs = {{0.3 / 1.3, 1.0 / 1.3}, {0.25, 0.75}};
    // ratios: 0.3 and 3.0
    CHECK(compute_corpus_lambda(probs, corpus, 0.5) == doctest::Approx(0.3));
    CHECK(compute_corpus_lambda(probs, corpus, 0.0) == 0.0);
}

TEST_CASE("quantile property: flagged fraction within 1/N of eta") {
    auto rng = substream(40, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> ratios(997);
    for (auto& r : ratios) r = unit(rng);  // continuous, below 1: clamp inert
    for (double eta : {0.1, 0.25, 0.5, 0.9}) {
        double lambda = adaptive_lambda(ratios, eta);
        std::size_t flagged = 0;
        for (double r : ratios) {
            if (r <= lambda) ++flagged;
        }
        double frac = static_cast<double>(flagged) / static_cast<double>(ratios.size());
        CHECK(std::abs(frac - eta) <= 1.0 / static_cast<double>(ratios.size()));
    }
}

TEST_CASE("lambda is non-decreasing in eta") {
    auto rng = substream(41, 0);
    std::uniform_real_distribution<double> unit(0.0, 2.0);
    std::vector<double> ratios(503);
    for (auto& r : ratios) r = unit(rng);
    double prev = -1.0;
    for (int i = 0; i <= 20; ++i) {
        double lambda = adaptive_lambda(ratios, i / 20.0);
        CHECK(lambda >= prev);
        prev = lambda;
    }
}

TEST_CASE("infinite ratios sort above all finite values") {
    std::vector<double> ratios = {std::numeric_limits<double>::infinity(), 0.2,
                                  std::numeric_limits<double>::infinity(), 0.7};
    CHECK(adaptive_lambda(ratios, 0.25) == doctest::Approx(0.2));
    CHECK(adaptive_lambda(ratios, 0.5) == doctest::Approx(0.7));
    CHECK(adaptive_lambda(ratios, 1.0) == 1.0);
}

TEST_SUITE_END();
