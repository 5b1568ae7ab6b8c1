#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flexlex/embedding_store.hpp"

namespace flexlex {

struct HumanRating {
    std::string word;
    std::uint64_t noun_occurrences = 0;
    std::uint64_t verb_occurrences = 0;
    double human_sim = 0.0;  // mean rating on the 0..2 scale

    bool operator==(const HumanRating&) const = default;
};

// TSV with header "word  noun_count  verb_count  human_sim".
std::vector<HumanRating> load_ratings(std::istream& in);
std::vector<HumanRating> load_ratings_file(const std::filesystem::path& path);

// 1 - cos(mean noun vector, mean verb vector): a distance, so it falls as human similarity rises.
double model_similarity(const EmbeddingRecord& record);

struct LayerCorrelation {
    std::string layer;
    double rho = 0.0;
    std::size_t n_words = 0;
    std::vector<std::string> dropped;  // rated words absent or unusable in this store
};

struct ProbeCurve {
    std::vector<std::string> layer_labels;
    std::vector<double> correlations;  // signed Spearman rho, distance vs human similarity
    std::vector<std::size_t> word_counts;
    std::optional<double> baseline;
    std::size_t baseline_words = 0;
    std::vector<std::string> diagnostics;
};

// Spearman rho between per-word model distances and human similarity over the words present in
// both. Throws InsufficientDataError below 3 matched words.
LayerCorrelation correlate_layer(const EmbeddingStore& store, const std::vector<HumanRating>& ratings,
                                 std::string label = {});

// Layers are reported in natural order of their labels ("layer2" before "layer10").
ProbeCurve probe(const std::vector<EmbeddingStore>& layer_stores, const std::vector<HumanRating>& ratings,
                 const EmbeddingStore* baseline_store = nullptr);

// layer, rho, abs_rho, n_words; the baseline row is labelled "static".
void write_probe_tsv(const ProbeCurve& curve, std::ostream& out, bool full_precision = false);

bool natural_less(const std::string& a, const std::string& b);

}  // namespace flexlex
