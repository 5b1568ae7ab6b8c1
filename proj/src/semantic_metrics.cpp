#include "flexlex/semantic_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "flexlex/error.hpp"
#include "flexlex/random.hpp"

namespace flexlex {
namespace {

constexpr double kMinNorm = 1e-12;

std::optional<double> mean_or_absent(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    return stats::mean(v);
}

template <typename Fn>
std::optional<stats::TestResult> try_test(Fn&& fn) {
    try {
        return fn();
    } catch (const DegenerateInputError&) {
        return std::nullopt;
    }
}

}  // namespace

std::vector<double> prototype(const VectorSet& vectors) {
    if (vectors.empty()) throw EmptyClassError("prototype of an empty vector set");
    const std::size_t d = vectors.dimension();
    std::vector<double> p(d, 0.0);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const auto v = vectors[i];
        for (std::size_t j = 0; j < d; ++j) p[j] += static_cast<double>(v[j]);
    }
    const double n = static_cast<double>(vectors.size());
    for (double& x : p) x /= n;
    return p;
}

double variation(const VectorSet& vectors) {
    if (vectors.empty()) throw EmptyClassError("variation of an empty vector set");
    const auto p = prototype(vectors);
    double total = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const auto v = vectors[i];
        double sq = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double diff = static_cast<double>(v[j]) - p[j];
            sq += diff * diff;
        }
        total += std::sqrt(sq);
    }
    return total / static_cast<double>(vectors.size());
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
    double ab = 0.0;
    double aa = 0.0;
    double bb = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        ab += a[j] * b[j];
        aa += a[j] * a[j];
        bb += b[j] * b[j];
    }
    const double na = std::sqrt(aa);
    const double nb = std::sqrt(bb);
    if (na < kMinNorm || nb < kMinNorm) throw UndefinedCosineError("cosine undefined for a zero-norm vector");
    return 1.0 - std::clamp(ab / (na * nb), -1.0, 1.0);
}

VectorSet select_rows(const VectorSet& vectors, std::span<const std::size_t> rows) {
    VectorSet out(vectors.dimension());
    for (std::size_t r : rows) out.push_back(vectors[r]);
    return out;
}

LemmaSemantics lemma_semantics(const EmbeddingRecord& record, Dominance dominant, const MetricsOptions& options) {
    const VectorSet& nouns = record.noun_vectors;
    const VectorSet& verbs = record.verb_vectors;
    if (nouns.empty() || verbs.empty())
        throw EmptyClassError("record '" + record.cluster_key + "' lacks noun or verb vectors");

    LemmaSemantics out;
    out.cluster_key = record.cluster_key;
    out.dominant = dominant;

    const std::size_t target = std::min(nouns.size(), verbs.size());
    VectorSet sampled;
    const bool sample_nouns = nouns.size() > target;
    const bool sample_verbs = verbs.size() > target;
    if (sample_nouns || sample_verbs) {
        rng::Engine eng(rng::lemma_seed(options.seed, record.cluster_key));
        const VectorSet& larger = sample_nouns ? nouns : verbs;
        const auto rows = rng::sample_without_replacement(larger.size(), target, eng);
        sampled = select_rows(larger, rows);
    }
    const VectorSet& noun_set = sample_nouns ? sampled : nouns;
    const VectorSet& verb_set = sample_verbs ? sampled : verbs;

    out.noun_variation = variation(noun_set);
    out.verb_variation = variation(verb_set);
    out.noun_sample_size = noun_set.size();
    out.verb_sample_size = verb_set.size();

    out.prototype_noun = prototype(options.downsample_prototypes ? noun_set : nouns);
    out.prototype_verb = prototype(options.downsample_prototypes ? verb_set : verbs);
    try {
        out.shift = cosine_distance(out.prototype_noun, out.prototype_verb);
    } catch (const UndefinedCosineError&) {
        throw UndefinedCosineError("record '" + record.cluster_key + "': zero-norm prototype");
    }
    return out;
}

LanguageSemantics language_semantics(std::vector<LemmaSemantics> lemmas) {
    std::sort(lemmas.begin(), lemmas.end(),
              [](const LemmaSemantics& a, const LemmaSemantics& b) { return a.cluster_key < b.cluster_key; });
    LanguageSemantics out;
    out.lemma_count = lemmas.size();
    for (const auto& l : lemmas) {
        out.noun_variations.push_back(l.noun_variation);
        out.verb_variations.push_back(l.verb_variation);
        switch (l.dominant) {
            case Dominance::Noun:
                ++out.noun_dominant;
                out.noun_dominant_shifts.push_back(l.shift);
                break;
            case Dominance::Verb:
                ++out.verb_dominant;
                out.verb_dominant_shifts.push_back(l.shift);
                break;
            case Dominance::Tie:
                ++out.ties;
                break;
        }
        if (l.dominant != Dominance::Tie) {
            out.majority_variations.push_back(l.majority_variation());
            out.minority_variations.push_back(l.minority_variation());
        }
    }
    out.nvs = mean_or_absent(out.noun_dominant_shifts);
    out.vns = mean_or_absent(out.verb_dominant_shifts);
    out.noun_variation = mean_or_absent(out.noun_variations);
    out.verb_variation = mean_or_absent(out.verb_variations);
    out.majority_variation = mean_or_absent(out.majority_variations);
    out.minority_variation = mean_or_absent(out.minority_variations);

    if (out.noun_dominant_shifts.size() >= 2 && out.verb_dominant_shifts.size() >= 2)
        out.shift_test = try_test([&] { return stats::unpaired_t(out.noun_dominant_shifts, out.verb_dominant_shifts); });
    if (out.noun_variations.size() >= 2)
        out.class_variation_test = try_test([&] { return stats::paired_t(out.noun_variations, out.verb_variations); });
    if (out.majority_variations.size() >= 2)
        out.dominance_variation_test =
            try_test([&] { return stats::paired_t(out.majority_variations, out.minority_variations); });
    return out;
}

}  // namespace flexlex
