// flexlex: noun/verb word class flexibility census and contextual semantic metrics.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flexlex/census.hpp"
#include "flexlex/embedding_store.hpp"
#include "flexlex/error.hpp"
#include "flexlex/lemma_merge.hpp"
#include "flexlex/pipeline.hpp"
#include "flexlex/probe.hpp"

namespace fs = std::filesystem;
using namespace flexlex;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitIo = 4;

// "LANG=PATH" pairs.
std::pair<std::string, fs::path> split_assignment(const std::string& arg, const char* flag) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size())
        throw ConfigError(std::string(flag) + " expects LANG=PATH, got '" + arg + "'");
    return {arg.substr(0, eq), fs::path(arg.substr(eq + 1))};
}

void add_threshold_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--min-total", cfg.flexibility.min_total, "Minimum NOUN+VERB occurrences for a flexible lemma")
        ->capture_default_str();
    cmd->add_option("--min-minority-frac", cfg.flexibility.min_minority_frac,
                    "Minimum minority-class fraction for a flexible lemma")
        ->capture_default_str();
    cmd->add_option("--min-tokens", cfg.gates.min_tokens, "Language inclusion gate on corpus size")
        ->capture_default_str();
    cmd->add_option("--min-flexibility", cfg.gates.min_flexibility,
                    "Language inclusion gate on noun and verb flexibility")
        ->capture_default_str();
    cmd->add_flag("--full-precision", cfg.full_precision, "Print reals with round-trip precision");
    cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores; FLEXLEX_THREADS caps it)")
        ->capture_default_str();
}

// Writes to `path`, or stdout when empty.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    fn(out);
    if (!out) throw IoError("failed writing: " + path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Word class flexibility census and contextual semantic metrics"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::vector<std::string> corpus_args;
    std::vector<std::string> store_args;
    std::string output;

    // census
    auto* census = app.add_subcommand("census", "Per-language noun/verb flexibility table");
    census->add_option("--corpus", corpus_args, "LANG=PATH (CoNLL-U file or directory); repeatable")->required();
    census->add_option("-o,--output", output, "Output TSV (default stdout)");
    std::string clusters_dir;
    census->add_option("--clusters-dir", clusters_dir, "Also dump <LANG>.clusters.tsv into this directory");
    add_threshold_flags(census, cfg);

    // metrics
    auto* metrics = app.add_subcommand("metrics", "Semantic shift and variation table from embedding stores");
    metrics->add_option("--store", store_args, "LANG=PATH of a WCF1 store; repeatable")->required();
    metrics->add_option("--corpus", corpus_args,
                        "LANG=PATH corpus supplying dominance; without it the store's vector counts are used");
    metrics->add_option("-o,--output", output, "Output TSV (default stdout)");
    metrics->add_option("--seed", cfg.seed, "Global downsampling seed")->capture_default_str();
    metrics->add_option("--min-class-count", cfg.min_class_count, "Minimum vectors per class")->capture_default_str();
    metrics->add_flag("--downsample-prototypes", cfg.downsample_prototypes,
                      "Compute prototypes and shift on the downsampled sets");
    add_threshold_flags(metrics, cfg);

    // probe
    auto* probe_cmd = app.add_subcommand("probe", "Layer-wise Spearman correlation against human ratings");
    std::string ratings_path;
    std::vector<std::string> layer_paths;
    std::string baseline_path;
    probe_cmd->add_option("--ratings", ratings_path, "Ratings TSV (word, noun_count, verb_count, human_sim)")
        ->required();
    probe_cmd->add_option("--layer", layer_paths, "WCF1 store for one layer; repeatable")->required();
    probe_cmd->add_option("--baseline", baseline_path, "WCF1 store of static vectors");
    probe_cmd->add_option("-o,--output", output, "Output TSV (default stdout)");
    probe_cmd->add_flag("--full-precision", cfg.full_precision, "Print reals with round-trip precision");

    // pca
    auto* pca = app.add_subcommand("pca", "2-D PCA scatter of one lemma's noun and verb embeddings");
    std::string pca_store;
    std::string pca_key;
    std::string pca_prefix;
    pca->add_option("--store", pca_store, "WCF1 store")->required();
    pca->add_option("--key", pca_key, "Cluster key to plot")->required();
    pca->add_option("-o,--output", pca_prefix, "Output prefix; writes PREFIX.tsv and PREFIX.svg")->required();

    // synth
    auto* synth = app.add_subcommand("synth", "Deterministic synthetic embedding store");
    SynthSpec spec;
    std::string synth_out;
    synth->add_option("--lemmas", spec.lemma_count, "Number of lemmas")->capture_default_str();
    synth->add_option("--nouns", spec.noun_count, "Noun vectors per lemma")->capture_default_str();
    synth->add_option("--verbs", spec.verb_count, "Verb vectors per lemma")->capture_default_str();
    synth->add_option("--dim", spec.dimension, "Vector dimension")->capture_default_str();
    synth->add_option("--offset", spec.class_offset, "Added to the first component of verb vectors")
        ->capture_default_str();
    synth->add_option("--seed", spec.seed, "Seed")->capture_default_str();
    synth->add_option("--label", spec.layer_label, "Layer label")->capture_default_str();
    synth->add_flag("--alternate", spec.alternate_dominance, "Swap noun/verb counts on odd lemmas");
    synth->add_option("-o,--output", synth_out, "Output WCF1 file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        for (const auto& a : corpus_args) {
            auto [lang, path] = split_assignment(a, "--corpus");
            cfg.corpora[lang].push_back(path);
        }
        for (const auto& a : store_args) {
            auto [lang, path] = split_assignment(a, "--store");
            if (!cfg.stores.emplace(lang, path).second) throw ConfigError("duplicate --store for '" + lang + "'");
        }

        if (*census) {
            cfg.validate();
            if (!clusters_dir.empty()) {
                fs::create_directories(clusters_dir);
                for (const auto& [lang, paths] : cfg.corpora) {
                    const auto clusters = build_clusters(load_corpus(paths, lang));
                    with_output((fs::path(clusters_dir) / (lang + ".clusters.tsv")).string(),
                                [&](std::ostream& out) { clusters.write_tsv(out); });
                }
            }
            const auto rows = run_census(cfg);
            for (const auto& r : rows)
                if (r.degenerate) std::cerr << "warning: " << r.language << ": a dominance group is empty\n";
            with_output(output, [&](std::ostream& out) { write_census_tsv(rows, out, cfg.full_precision); });
        } else if (*metrics) {
            const auto rows = run_metrics(cfg);
            for (const auto& r : rows)
                for (const auto& d : r.diagnostics) std::cerr << "warning: " << r.language << ": " << d << '\n';
            with_output(output, [&](std::ostream& out) { write_metrics_tsv(rows, out, cfg.full_precision); });
        } else if (*probe_cmd) {
            const auto ratings = load_ratings_file(ratings_path);
            std::vector<EmbeddingStore> layers;
            for (const auto& p : layer_paths) layers.push_back(read_store_file(p));
            std::optional<EmbeddingStore> baseline;
            if (!baseline_path.empty()) baseline = read_store_file(baseline_path);
            const auto curve = probe(layers, ratings, baseline ? &*baseline : nullptr);
            for (const auto& d : curve.diagnostics) std::cerr << "warning: " << d << '\n';
            with_output(output, [&](std::ostream& out) { write_probe_tsv(curve, out, cfg.full_precision); });
        } else if (*pca) {
            const auto store = read_store_file(pca_store);
            const auto* rec = store.find(pca_key);
            if (!rec) throw ConfigError("cluster key '" + pca_key + "' not in " + pca_store);
            const auto projection = emit_pca_plot(*rec, pca_prefix);
            if (!projection.diagnostic.empty()) std::cerr << "warning: " << projection.diagnostic << '\n';
        } else if (*synth) {
            write_store_file(synth_store(spec), synth_out);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.kind()) {
            case ErrorKind::Config: return kExitConfig;
            case ErrorKind::Data: return kExitData;
            case ErrorKind::Io: return kExitIo;
        }
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}
