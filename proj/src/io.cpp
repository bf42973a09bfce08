#include "alim/io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace alim {

using nlohmann::json;

void write_corpus(const std::string& path, const std::vector<PartialSample>& samples,
                  int d, const CorruptionSpec& spec) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_corpus: cannot open " + path);
    json header = {{"c", spec.c}, {"d", d},     {"n", samples.size()},
                   {"q", spec.q}, {"eta", spec.eta}, {"seed", spec.seed}};
    out << header.dump() << "\n";
    for (const auto& s : samples) {
        json rec;
        rec["features"] = s.features;
        rec["candidates"] = json::array();
        for (auto v : s.candidates) rec["candidates"].push_back(static_cast<int>(v));
        if (s.truth) rec["truth"] = *s.truth;
        if (s.is_noisy) rec["is_noisy"] = *s.is_noisy;
        out << rec.dump() << "\n";
    }
    if (!out) throw std::runtime_error("write_corpus: write failed on " + path);
}

std::pair<std::vector<PartialSample>, CorruptionSpec> read_corpus(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_corpus: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_corpus: missing header in " + path);
    json header = json::parse(line);
    CorruptionSpec spec;
    spec.c = header.at("c");
    spec.q = header.at("q");
    spec.eta = header.at("eta");
    spec.seed = header.at("seed");

    std::vector<PartialSample> samples;
    samples.reserve(header.value("n", 0));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json rec = json::parse(line);
        PartialSample s;
        s.features = rec.at("features").get<Vec>();
        for (int v : rec.at("candidates")) s.candidates.push_back(static_cast<std::uint8_t>(v));
        if (rec.contains("truth")) s.truth = rec["truth"].get<int>();
        if (rec.contains("is_noisy")) s.is_noisy = rec["is_noisy"].get<bool>();
        if (!is_valid_candidates(s.candidates) ||
            s.candidates.size() != static_cast<std::size_t>(spec.c))
            throw std::runtime_error("read_corpus: invalid candidate mask in " + path);
        samples.push_back(std::move(s));
    }
    return {std::move(samples), spec};
}

void write_metrics(const std::string& path, const std::vector<EpochMetrics>& metrics) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_metrics: cannot open " + path);
    for (const auto& m : metrics) {
        json rec = {{"epoch", m.epoch},
                    {"loss", m.mean_loss},
                    {"accuracy", m.test_accuracy},
                    {"lambda", m.lambda},
                    {"mean_ratio_clean", m.mean_ratio_clean},
                    {"mean_ratio_noisy", m.mean_ratio_noisy},
                    {"separation_auc", m.separation_auc}};
        out << rec.dump() << "\n";
    }
}

std::vector<EpochMetrics> read_metrics(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_metrics: cannot open " + path);
    std::vector<EpochMetrics> metrics;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json rec = json::parse(line);
        EpochMetrics m;
        m.epoch = rec.at("epoch");
        m.mean_loss = rec.at("loss");
        m.test_accuracy = rec.at("accuracy");
        m.lambda = rec.at("lambda");
        m.mean_ratio_clean = rec.at("mean_ratio_clean");
        m.mean_ratio_noisy = rec.at("mean_ratio_noisy");
        m.separation_auc = rec.at("separation_auc");
        metrics.push_back(m);
    }
    return metrics;
}

void write_stats(const std::string& path, const CorpusStats& stats) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_stats: cannot open " + path);
    json rec = {{"n", stats.n},
                {"mean_candidate_size", stats.mean_candidate_size},
                {"expected_candidate_size", stats.expected_candidate_size},
                {"candidate_size_sigma", stats.candidate_size_sigma},
                {"noise_fraction", stats.noise_fraction},
                {"expected_noise_fraction", stats.expected_noise_fraction},
                {"noise_fraction_sigma", stats.noise_fraction_sigma},
                {"per_class_counts", stats.per_class_counts},
                {"candidate_size_ok", stats.candidate_size_ok},
                {"noise_fraction_ok", stats.noise_fraction_ok}};
    out << rec.dump(2) << "\n";
}

}  // namespace alim
