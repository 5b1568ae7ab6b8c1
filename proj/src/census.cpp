#include "flexlex/census.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "flexlex/error.hpp"
#include "flexlex/format.hpp"

namespace flexlex {

std::string_view to_string(Dominance d) {
    switch (d) {
        case Dominance::Noun: return "noun";
        case Dominance::Verb: return "verb";
        case Dominance::Tie: return "tie";
    }
    return "tie";
}

Dominance dominance_of(std::uint64_t noun_count, std::uint64_t verb_count) {
    if (noun_count > verb_count) return Dominance::Noun;
    if (verb_count > noun_count) return Dominance::Verb;
    return Dominance::Tie;
}

void FlexibilityThresholds::validate() const {
    if (min_total < 1) throw ConfigError("min_total must be at least 1");
    if (!(min_minority_frac >= 0.0 && min_minority_frac <= 0.5))
        throw ConfigError("min_minority_frac must lie in [0, 0.5]");
}

void InclusionGates::validate() const {
    if (!(min_flexibility >= 0.0 && min_flexibility <= 1.0))
        throw ConfigError("flexibility gate must lie in [0, 1]");
}

std::vector<ClassCounts> count_classes(const TaggedCorpus& corpus, const ClusterSet& clusters) {
    std::map<std::string, ClassCounts> by_cluster;
    for (const auto& sentence : corpus.sentences()) {
        for (const auto& token : sentence) {
            const bool noun = token.upos == "NOUN";
            const bool verb = token.upos == "VERB";
            if (!noun && !verb) continue;
            std::string key = clusters.resolve(token.lemma_key());
            auto& entry = by_cluster[key];
            if (entry.cluster.empty()) entry.cluster = std::move(key);
            (noun ? entry.noun_count : entry.verb_count) += 1;
        }
    }
    std::vector<ClassCounts> out;
    out.reserve(by_cluster.size());
    for (auto& [key, counts] : by_cluster) out.push_back(std::move(counts));
    return out;
}

FlexibilityRecord classify(const ClassCounts& counts, const FlexibilityThresholds& thresholds) {
    thresholds.validate();
    FlexibilityRecord rec;
    rec.counts = counts;
    rec.dominant = dominance_of(counts.noun_count, counts.verb_count);
    const std::uint64_t total = counts.noun_count + counts.verb_count;
    const std::uint64_t minority = std::min(counts.noun_count, counts.verb_count);
    rec.flexible = total >= thresholds.min_total && minority >= 1 &&
                   static_cast<double>(minority) / static_cast<double>(total) >= thresholds.min_minority_frac;
    return rec;
}

std::vector<FlexibilityRecord> classify_all(const std::vector<ClassCounts>& counts,
                                            const FlexibilityThresholds& thresholds) {
    thresholds.validate();
    std::vector<FlexibilityRecord> out;
    out.reserve(counts.size());
    for (const auto& c : counts) out.push_back(classify(c, thresholds));
    return out;
}

LanguageCensus language_census(const std::vector<FlexibilityRecord>& records, std::uint64_t token_count,
                               const InclusionGates& gates, std::string language) {
    gates.validate();
    LanguageCensus c;
    c.language = std::move(language);
    c.token_count = token_count;
    for (const auto& r : records) {
        if (r.dominant == Dominance::Noun) {
            ++c.noun_lemmas;
            if (r.flexible) ++c.flexible_noun_lemmas;
        } else if (r.dominant == Dominance::Verb) {
            ++c.verb_lemmas;
            if (r.flexible) ++c.flexible_verb_lemmas;
        }
    }
    c.degenerate = c.noun_lemmas == 0 || c.verb_lemmas == 0;
    if (c.noun_lemmas > 0)
        c.noun_flexibility = static_cast<double>(c.flexible_noun_lemmas) / static_cast<double>(c.noun_lemmas);
    if (c.verb_lemmas > 0)
        c.verb_flexibility = static_cast<double>(c.flexible_verb_lemmas) / static_cast<double>(c.verb_lemmas);
    c.included = token_count >= gates.min_tokens && c.noun_flexibility >= gates.min_flexibility &&
                 c.verb_flexibility >= gates.min_flexibility;
    return c;
}

void write_census_tsv(const std::vector<LanguageCensus>& rows, std::ostream& out, bool full_precision) {
    out << "language\tnouns\tverbs\tnoun_flexibility\tverb_flexibility\tincluded\n";
    for (const auto& r : rows) {
        out << r.language << '\t' << r.noun_lemmas << '\t' << r.verb_lemmas << '\t'
            << format_real(r.noun_flexibility, full_precision) << '\t'
            << format_real(r.verb_flexibility, full_precision) << '\t' << (r.included ? "true" : "false") << '\n';
    }
}

}  // namespace flexlex
