#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "flexlex/conllu.hpp"
#include "flexlex/lemma_merge.hpp"

namespace flexlex {

enum class Dominance { Noun, Verb, Tie };

std::string_view to_string(Dominance d);

struct ClassCounts {
    std::string cluster;
    std::uint64_t noun_count = 0;
    std::uint64_t verb_count = 0;

    bool operator==(const ClassCounts&) const = default;
};

Dominance dominance_of(std::uint64_t noun_count, std::uint64_t verb_count);

struct FlexibilityThresholds {
    std::uint64_t min_total = 10;
    double min_minority_frac = 0.05;

    void validate() const;  // throws ConfigError
};

struct FlexibilityRecord {
    ClassCounts counts;
    bool flexible = false;
    Dominance dominant = Dominance::Tie;

    bool operator==(const FlexibilityRecord&) const = default;
};

struct InclusionGates {
    std::uint64_t min_tokens = 100000;
    double min_flexibility = 0.025;

    void validate() const;
};

struct LanguageCensus {
    std::string language;
    std::uint64_t token_count = 0;
    std::uint64_t noun_lemmas = 0;  // noun-dominant clusters, pure-noun ones included
    std::uint64_t verb_lemmas = 0;
    std::uint64_t flexible_noun_lemmas = 0;
    std::uint64_t flexible_verb_lemmas = 0;
    double noun_flexibility = 0.0;
    double verb_flexibility = 0.0;
    bool included = false;
    bool degenerate = false;  // a dominance group was empty

    bool operator==(const LanguageCensus&) const = default;
};

// One entry per cluster with at least one NOUN or VERB token, sorted by cluster key.
std::vector<ClassCounts> count_classes(const TaggedCorpus& corpus, const ClusterSet& clusters);

FlexibilityRecord classify(const ClassCounts& counts, const FlexibilityThresholds& thresholds = {});

std::vector<FlexibilityRecord> classify_all(const std::vector<ClassCounts>& counts,
                                            const FlexibilityThresholds& thresholds = {});

LanguageCensus language_census(const std::vector<FlexibilityRecord>& records, std::uint64_t token_count,
                               const InclusionGates& gates = {}, std::string language = {});

// Header plus one row per census, in the order given.
void write_census_tsv(const std::vector<LanguageCensus>& rows, std::ostream& out, bool full_precision = false);

}  // namespace flexlex
