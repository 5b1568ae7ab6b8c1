#include "flexlex/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include "flexlex/error.hpp"
#include "flexlex/format.hpp"
#include "flexlex/parallel.hpp"
#include "flexlex/random.hpp"

namespace flexlex {
namespace {

const FlexibilityRecord* find_record(const std::vector<FlexibilityRecord>& records, const std::string& key) {
    auto it = std::lower_bound(records.begin(), records.end(), key,
                               [](const FlexibilityRecord& r, const std::string& k) { return r.counts.cluster < k; });
    if (it == records.end() || it->counts.cluster != key) return nullptr;
    return &*it;
}

std::string opt_real(const std::optional<double>& v, bool full) { return v ? format_real(*v, full) : "NA"; }

void write_test(std::ostream& out, const std::optional<stats::TestResult>& t, bool full) {
    if (!t) {
        out << "\tNA\tNA\tNA";
        return;
    }
    const auto stars = stats::to_string(t->stars);
    out << '\t' << format_real(t->statistic, full) << '\t' << format_real(t->p_value, full) << '\t'
        << (stars.empty() ? "ns" : stars);
}

}  // namespace

void RunConfig::validate() const {
    flexibility.validate();
    gates.validate();
    if (min_class_count < 1) throw ConfigError("min_class_count must be at least 1");
}

CorpusCensus census_corpus(const TaggedCorpus& corpus, const FlexibilityThresholds& thresholds,
                           const InclusionGates& gates) {
    CorpusCensus out{{}, build_clusters(corpus), {}};
    out.records = classify_all(count_classes(corpus, out.clusters), thresholds);
    out.census = language_census(out.records, corpus.token_count(), gates, corpus.language_code());
    return out;
}

std::vector<LanguageCensus> run_census(const RunConfig& config) {
    config.validate();
    std::vector<std::pair<std::string, std::vector<std::filesystem::path>>> jobs(config.corpora.begin(),
                                                                                 config.corpora.end());
    std::vector<LanguageCensus> rows(jobs.size());
    parallel_for(jobs.size(), resolve_thread_count(config.threads), [&](std::size_t i) {
        const auto corpus = load_corpus(jobs[i].second, jobs[i].first);
        rows[i] = census_corpus(corpus, config.flexibility, config.gates).census;
    });
    return rows;
}

MetricsRow language_metrics(const std::string& language, const EmbeddingStore& store, const CorpusCensus* census,
                            const RunConfig& config) {
    config.validate();
    MetricsRow row;
    row.language = language;
    row.store_records = store.records.size();
    const EmbeddingStore eligible = filter_eligible(store, config.min_class_count);

    struct Job {
        const EmbeddingRecord* record;
        Dominance dominant;
    };
    std::vector<Job> jobs;
    std::size_t matched = 0;
    std::size_t unmatched = 0;
    std::size_t inflexible = 0;
    for (const auto& rec : store.records) {
        if (census && census->clusters.contains(rec.cluster_key)) ++matched;
    }
    if (census && !store.records.empty() && matched == 0)
        throw ConfigError("language '" + language + "': no store record matches a cluster of its corpus");

    for (const auto& rec : eligible.records) {
        ClassCounts counts;
        if (census) {
            const auto* fr = find_record(census->records, census->clusters.resolve(rec.cluster_key));
            if (!fr) {
                ++unmatched;
                continue;
            }
            counts = fr->counts;
        } else {
            counts = ClassCounts{rec.cluster_key, rec.noun_vectors.size(), rec.verb_vectors.size()};
        }
        const auto fr = classify(counts, config.flexibility);
        if (!fr.flexible) {
            ++inflexible;
            continue;
        }
        jobs.push_back({&rec, fr.dominant});
    }
    if (unmatched) row.diagnostics.push_back(std::to_string(unmatched) + " eligible record(s) not found in the census");
    if (inflexible) row.diagnostics.push_back(std::to_string(inflexible) + " eligible record(s) are not flexible");

    std::vector<std::optional<LemmaSemantics>> results(jobs.size());
    std::vector<std::string> errors(jobs.size());
    const MetricsOptions options{config.seed, config.downsample_prototypes};
    parallel_for(jobs.size(), resolve_thread_count(config.threads), [&](std::size_t i) {
        try {
            results[i] = lemma_semantics(*jobs[i].record, jobs[i].dominant, options);
        } catch (const UndefinedCosineError& e) {
            errors[i] = e.what();
        }
    });
    std::vector<LemmaSemantics> lemmas;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (results[i]) {
            lemmas.push_back(std::move(*results[i]));
        } else {
            row.diagnostics.push_back("skipped " + errors[i]);
        }
    }
    row.eligible_records = lemmas.size();
    row.semantics = language_semantics(std::move(lemmas));
    return row;
}

std::vector<MetricsRow> run_metrics(const RunConfig& config) {
    config.validate();
    if (!config.corpora.empty()) {
        for (const auto& [lang, path] : config.stores)
            if (!config.corpora.contains(lang)) throw ConfigError("store for '" + lang + "' has no matching corpus");
        for (const auto& [lang, paths] : config.corpora)
            if (!config.stores.contains(lang)) throw ConfigError("corpus for '" + lang + "' has no matching store");
    }
    std::vector<MetricsRow> rows;
    for (const auto& [lang, path] : config.stores) {
        const EmbeddingStore store = read_store_file(path);
        std::optional<CorpusCensus> census;
        if (auto it = config.corpora.find(lang); it != config.corpora.end())
            census = census_corpus(load_corpus(it->second, lang), config.flexibility, config.gates);
        rows.push_back(language_metrics(lang, store, census ? &*census : nullptr, config));
    }
    return rows;
}

void write_metrics_tsv(const std::vector<MetricsRow>& rows, std::ostream& out, bool full) {
    out << "language\tlemmas\tnoun_dominant\tverb_dominant\tnvs\tvns\tnoun_var\tverb_var\tmajority_var\tminority_var"
           "\tshift_t\tshift_p\tshift_stars\tclass_var_t\tclass_var_p\tclass_var_stars"
           "\tdominance_var_t\tdominance_var_p\tdominance_var_stars\n";
    for (const auto& r : rows) {
        const auto& s = r.semantics;
        out << r.language << '\t' << s.lemma_count << '\t' << s.noun_dominant << '\t' << s.verb_dominant << '\t'
            << opt_real(s.nvs, full) << '\t' << opt_real(s.vns, full) << '\t' << opt_real(s.noun_variation, full)
            << '\t' << opt_real(s.verb_variation, full) << '\t' << opt_real(s.majority_variation, full) << '\t'
            << opt_real(s.minority_variation, full);
        write_test(out, s.shift_test, full);
        write_test(out, s.class_variation_test, full);
        write_test(out, s.dominance_variation_test, full);
        out << '\n';
    }
}

std::string synth_key(std::size_t lemma_index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "lemma%05zu", lemma_index);
    return buf;
}

EmbeddingStore synth_store(const SynthSpec& spec) {
    if (spec.dimension < 1) throw ConfigError("synthetic store dimension must be at least 1");
    EmbeddingStore store;
    store.dimension = spec.dimension;
    store.layer_label = spec.layer_label;
    std::vector<float> v(spec.dimension);
    for (std::size_t l = 0; l < spec.lemma_count; ++l) {
        EmbeddingRecord rec;
        rec.cluster_key = synth_key(l);
        rec.noun_vectors = VectorSet(spec.dimension);
        rec.verb_vectors = VectorSet(spec.dimension);
        const bool swap = spec.alternate_dominance && (l % 2 == 1);
        const std::size_t counts[2] = {swap ? spec.verb_count : spec.noun_count,
                                       swap ? spec.noun_count : spec.verb_count};
        const std::uint64_t lemma_hash = rng::combine(spec.seed, rng::hash_bytes(rec.cluster_key));
        for (std::uint64_t cls = 0; cls < 2; ++cls) {
            for (std::uint64_t i = 0; i < counts[cls]; ++i) {
                rng::Engine eng(rng::combine(rng::combine(lemma_hash, cls), i));
                for (auto& x : v) x = static_cast<float>(rng::standard_normal(eng));
                if (cls == 1) v[0] = static_cast<float>(static_cast<double>(v[0]) + spec.class_offset);
                (cls == 0 ? rec.noun_vectors : rec.verb_vectors).push_back(v);
            }
        }
        store.records.push_back(std::move(rec));
    }
    return store;
}

stats::Projection2D project_record(const EmbeddingRecord& record) {
    if (record.noun_vectors.empty() || record.verb_vectors.empty())
        throw EmptyClassError("record '" + record.cluster_key + "' needs both noun and verb vectors for a PCA plot");
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
    for (const auto* set : {&record.noun_vectors, &record.verb_vectors}) {
        for (std::size_t i = 0; i < set->size(); ++i) {
            const auto v = (*set)[i];
            rows.emplace_back(v.begin(), v.end());
            labels.emplace_back(set == &record.noun_vectors ? "noun" : "verb");
        }
    }
    auto projection = stats::pca2(rows);
    projection.class_labels = std::move(labels);
    return projection;
}

void write_projection_tsv(const stats::Projection2D& p, std::ostream& out, bool full) {
    out << "x\ty\tclass\n";
    for (std::size_t i = 0; i < p.points.size(); ++i)
        out << format_real(p.points[i][0], full) << '\t' << format_real(p.points[i][1], full) << '\t'
            << (i < p.class_labels.size() ? p.class_labels[i] : "") << '\n';
}

void write_projection_svg(const stats::Projection2D& p, const std::string& title, std::ostream& out) {
    constexpr double kSize = 480.0;
    constexpr double kMargin = 40.0;
    double lo_x = 0.0, hi_x = 0.0, lo_y = 0.0, hi_y = 0.0;
    for (const auto& pt : p.points) {
        lo_x = std::min(lo_x, pt[0]);
        hi_x = std::max(hi_x, pt[0]);
        lo_y = std::min(lo_y, pt[1]);
        hi_y = std::max(hi_y, pt[1]);
    }
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
    auto sx = [&](double x) { return kMargin + (x - lo_x) / span * (kSize - 2 * kMargin); };
    auto sy = [&](double y) { return kSize - kMargin - (y - lo_y) / span * (kSize - 2 * kMargin); };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
        << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">";
    for (char c : title) {
        if (c == '<') out << "&lt;";
        else if (c == '>') out << "&gt;";
        else if (c == '&') out << "&amp;";
        else out << c;
    }
    out << "</text>\n";
    char buf[128];
    for (std::size_t i = 0; i < p.points.size(); ++i) {
        const bool verb = i < p.class_labels.size() && p.class_labels[i] == "verb";
        const double x = sx(p.points[i][0]);
        const double y = sy(p.points[i][1]);
        if (verb) {
            std::snprintf(buf, sizeof buf,
                          "<rect x=\"%.2f\" y=\"%.2f\" width=\"5\" height=\"5\" fill=\"#d62728\" fill-opacity=\"0.6\"/>\n",
                          x - 2.5, y - 2.5);
        } else {
            std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.8\" fill=\"#1f77b4\" fill-opacity=\"0.6\"/>\n",
                          x, y);
        }
        out << buf;
    }
    out << "<text x=\"" << kSize - 120 << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#1f77b4\">"
        << "&#9679; noun</text>\n";
    out << "<text x=\"" << kSize - 60 << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#d62728\">"
        << "&#9632; verb</text>\n";
    out << "</svg>\n";
}

stats::Projection2D emit_pca_plot(const EmbeddingRecord& record, const std::filesystem::path& prefix) {
    auto projection = project_record(record);
    auto tsv_path = prefix;
    tsv_path += ".tsv";
    auto svg_path = prefix;
    svg_path += ".svg";
    std::ofstream tsv(tsv_path);
    if (!tsv) throw IoError("cannot open for writing: " + tsv_path.string());
    write_projection_tsv(projection, tsv);
    std::ofstream svg(svg_path);
    if (!svg) throw IoError("cannot open for writing: " + svg_path.string());
    write_projection_svg(projection, record.cluster_key, svg);
    if (!tsv || !svg) throw IoError("failed writing PCA plot to " + prefix.string());
    return projection;
}

}  // namespace flexlex
