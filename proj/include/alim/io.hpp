#pragma once

#include <string>
#include <utility>
#include <vector>

#include "alim/datagen.hpp"
#include "alim/trainer.hpp"
#include "alim/types.hpp"

namespace alim {

// Corpus files are newline-delimited JSON: a header object carrying
// {c, d, n, q, eta, seed}, then one object per sample with `features`,
// `candidates`, and optional `truth` / `is_noisy`.
void write_corpus(const std::string& path, const std::vector<PartialSample>& samples,
                  int d, const CorruptionSpec& spec);

std::pair<std::vector<PartialSample>, CorruptionSpec> read_corpus(
    const std::string& path);

// One JSON record per epoch.
void write_metrics(const std::string& path, const std::vector<EpochMetrics>& metrics);

std::vector<EpochMetrics> read_metrics(const std::string& path);

void write_stats(const std::string& path, const CorpusStats& stats);

}  // namespace alim
