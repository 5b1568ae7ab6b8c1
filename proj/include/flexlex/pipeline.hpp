#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "flexlex/census.hpp"
#include "flexlex/embedding_store.hpp"
#include "flexlex/lemma_merge.hpp"
#include "flexlex/semantic_metrics.hpp"
#include "flexlex/stats.hpp"

namespace flexlex {

struct RunConfig {
    std::map<std::string, std::vector<std::filesystem::path>> corpora;  // language -> CoNLL-U files/dirs
    std::map<std::string, std::filesystem::path> stores;                // language -> WCF1 store
    FlexibilityThresholds flexibility;
    InclusionGates gates;
    std::size_t min_class_count = 30;
    std::uint64_t seed = 0;
    bool downsample_prototypes = false;
    bool full_precision = false;
    unsigned threads = 0;

    void validate() const;  // throws ConfigError
};

struct CorpusCensus {
    LanguageCensus census;
    ClusterSet clusters;
    std::vector<FlexibilityRecord> records;  // sorted by cluster key
};

CorpusCensus census_corpus(const TaggedCorpus& corpus, const FlexibilityThresholds& thresholds,
                           const InclusionGates& gates);

// One row per language, sorted by language code.
std::vector<LanguageCensus> run_census(const RunConfig& config);

struct MetricsRow {
    std::string language;
    LanguageSemantics semantics;
    std::size_t store_records = 0;
    std::size_t eligible_records = 0;  // after the per-class count filter and the flexibility check
    std::vector<std::string> diagnostics;
};

// Dominance and flexibility come from the language's corpus census when one is configured,
// otherwise from the store's own vector counts. Per-lemma work runs on `threads` workers; results
// are bit-identical for any thread count.
MetricsRow language_metrics(const std::string& language, const EmbeddingStore& store, const CorpusCensus* census,
                            const RunConfig& config);

std::vector<MetricsRow> run_metrics(const RunConfig& config);

void write_metrics_tsv(const std::vector<MetricsRow>& rows, std::ostream& out, bool full_precision = false);

struct SynthSpec {
    std::size_t lemma_count = 10;
    std::size_t noun_count = 40;
    std::size_t verb_count = 30;
    std::uint32_t dimension = 8;
    double class_offset = 0.0;
    std::uint64_t seed = 0;
    bool alternate_dominance = false;  // odd-numbered lemmas swap their noun and verb counts
    std::string layer_label = "synthetic";
};

std::string synth_key(std::size_t lemma_index);

// Every vector is standard normal from a stream seeded by (seed, lemma, class, index); verb
// vectors get class_offset added to their first component.
EmbeddingStore synth_store(const SynthSpec& spec);

// PCA of all noun then all verb vectors of a record, labelled by class.
stats::Projection2D project_record(const EmbeddingRecord& record);

void write_projection_tsv(const stats::Projection2D& projection, std::ostream& out, bool full_precision = false);
void write_projection_svg(const stats::Projection2D& projection, const std::string& title, std::ostream& out);

// Writes <prefix>.tsv and <prefix>.svg.
stats::Projection2D emit_pca_plot(const EmbeddingRecord& record, const std::filesystem::path& prefix);

}  // namespace flexlex
