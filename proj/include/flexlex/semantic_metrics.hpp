#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flexlex/census.hpp"
#include "flexlex/embedding_store.hpp"
#include "flexlex/stats.hpp"

namespace flexlex {

struct MetricsOptions {
    std::uint64_t seed = 0;
    // Prototypes and shift normally use the full class sets; variations always use the
    // downsampled ones. Setting this computes prototypes from the downsampled sets too.
    bool downsample_prototypes = false;
};

// Componentwise mean accumulated in double. Throws EmptyClassError on an empty set.
std::vector<double> prototype(const VectorSet& vectors);

// Mean Euclidean distance of each vector to the set's prototype.
double variation(const VectorSet& vectors);

// 1 - cos(a, b). Throws UndefinedCosineError when either norm is below 1e-12.
double cosine_distance(std::span<const double> a, std::span<const double> b);

VectorSet select_rows(const VectorSet& vectors, std::span<const std::size_t> rows);

struct LemmaSemantics {
    std::string cluster_key;
    std::vector<double> prototype_noun;
    std::vector<double> prototype_verb;
    double noun_variation = 0.0;
    double verb_variation = 0.0;
    double shift = 0.0;
    Dominance dominant = Dominance::Tie;
    std::size_t noun_sample_size = 0;  // vectors entering the noun variation
    std::size_t verb_sample_size = 0;

    // Variation of the dominant / non-dominant class; meaningless for ties.
    double majority_variation() const { return dominant == Dominance::Verb ? verb_variation : noun_variation; }
    double minority_variation() const { return dominant == Dominance::Verb ? noun_variation : verb_variation; }
};

// The larger class is downsampled without replacement to the smaller class's size, with a stream
// seeded from (options.seed, cluster_key), before the variations are computed.
LemmaSemantics lemma_semantics(const EmbeddingRecord& record, Dominance dominant, const MetricsOptions& options = {});

struct LanguageSemantics {
    std::optional<double> nvs;  // mean shift over noun-dominant lemmas
    std::optional<double> vns;
    std::optional<double> noun_variation;  // over all lemmas, ties included
    std::optional<double> verb_variation;
    std::optional<double> majority_variation;  // ties excluded
    std::optional<double> minority_variation;

    std::size_t lemma_count = 0;
    std::size_t noun_dominant = 0;
    std::size_t verb_dominant = 0;
    std::size_t ties = 0;

    // Per-lemma samples in cluster-key order.
    std::vector<double> noun_dominant_shifts;
    std::vector<double> verb_dominant_shifts;
    std::vector<double> noun_variations;
    std::vector<double> verb_variations;
    std::vector<double> majority_variations;
    std::vector<double> minority_variations;

    // Unpaired for NVS vs VNS; paired for the two variation comparisons. Absent when a sample
    // is too small or degenerate.
    std::optional<stats::TestResult> shift_test;
    std::optional<stats::TestResult> class_variation_test;
    std::optional<stats::TestResult> dominance_variation_test;
};

// Aggregates in ascending cluster-key order, so the result does not depend on input order.
LanguageSemantics language_semantics(std::vector<LemmaSemantics> lemmas);

}  // namespace flexlex
