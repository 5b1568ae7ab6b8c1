#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "flexlex/error.hpp"
#include "flexlex/pipeline.hpp"
#include "oracles.hpp"

using namespace flexlex;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("flexlex_unit_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string metrics_tsv(const RunConfig& c) {
    std::ostringstream out;
    write_metrics_tsv(run_metrics(c), out, true);
    return out.str();
}

}  // namespace

TEST_CASE("synthetic stores are deterministic") {
    SynthSpec spec;
    spec.seed = 17;
    CHECK(encode_store(synth_store(spec)) == encode_store(synth_store(spec)));
    spec.seed = 18;
    const auto other = synth_store(spec);
    spec.seed = 17;
    CHECK(encode_store(other) != encode_store(synth_store(spec)));
    const auto s = synth_store(spec);
    CHECK(s.records.size() == 10);
    CHECK(s.records[0].cluster_key == "lemma00000");
    CHECK(s.records[3].noun_vectors.size() == 40);
    CHECK(s.records[3].verb_vectors.size() == 30);
    spec.alternate_dominance = true;
    CHECK(synth_store(spec).records[3].noun_vectors.size() == 30);
}

TEST_CASE("synthetic shift matches the oracle at any offset") {
    SynthSpec spec;
    spec.lemma_count = 6;
    spec.noun_count = 60;
    spec.verb_count = 60;
    spec.dimension = 16;
    for (double offset : {0.0, 1000.0}) {
        spec.class_offset = offset;
        for (const auto& r : synth_store(spec).records) {
            const auto l = lemma_semantics(r, Dominance::Tie);
            CHECK(oracle::close_rel(
                l.shift, oracle::cosine_dist(oracle::mean_of(oracle::rows_of(r.noun_vectors)),
                                             oracle::mean_of(oracle::rows_of(r.verb_vectors))),
                1e-9));
            if (offset > 0) CHECK(prototype(r.verb_vectors)[0] > 999.0);
        }
    }
}

TEST_CASE("run_metrics equals manual composition") {
    const auto dir = scratch("metrics");
    SynthSpec spec;
    spec.lemma_count = 14;
    spec.noun_count = 36;
    spec.verb_count = 31;
    spec.dimension = 6;
    spec.class_offset = 0.5;
    spec.alternate_dominance = true;
    const auto store = synth_store(spec);
    write_store_file(store, dir / "en.wcf");

    RunConfig c;
    c.stores["en"] = dir / "en.wcf";
    c.seed = 5;
    const auto rows = run_metrics(c);
    REQUIRE(rows.size() == 1);

    std::vector<LemmaSemantics> manual;
    for (const auto& r : store.records)
        manual.push_back(lemma_semantics(r, dominance_of(r.noun_vectors.size(), r.verb_vectors.size()), {5}));
    const auto expected = language_semantics(manual);
    const auto& got = rows[0].semantics;
    CHECK(got.lemma_count == 14);
    CHECK(got.noun_dominant == 7);
    CHECK(got.verb_dominant == 7);
    CHECK(*got.nvs == *expected.nvs);
    CHECK(*got.vns == *expected.vns);
    CHECK(*got.majority_variation == *expected.majority_variation);
    CHECK(got.shift_test->p_value == expected.shift_test->p_value);
}

TEST_CASE("metrics output is identical for any thread count") {
    const auto dir = scratch("threads");
    SynthSpec spec;
    spec.lemma_count = 40;
    spec.dimension = 12;
    spec.alternate_dominance = true;
    spec.class_offset = 0.2;
    write_store_file(synth_store(spec), dir / "xx.wcf");
    RunConfig c;
    c.stores["xx"] = dir / "xx.wcf";
    c.seed = 99;
    c.threads = 1;
    const auto one = metrics_tsv(c);
    c.threads = 2;
    CHECK(metrics_tsv(c) == one);
    c.threads = 8;
    CHECK(metrics_tsv(c) == one);
}

TEST_CASE("identical noun and verb vectors give zero shift and equal variation") {
    EmbeddingStore store;
    store.dimension = 3;
    std::mt19937_64 eng(4);
    std::normal_distribution<float> g;
    for (int l = 0; l < 6; ++l) {
        VectorSet s(3);
        for (int i = 0; i < 35; ++i) {
            std::vector<float> v{g(eng) + 3.0f, g(eng), g(eng)};
            s.push_back(v);
        }
        store.records.push_back({"k" + std::to_string(l), s, s});
    }
    RunConfig c;
    const auto row = language_metrics("xx", store, nullptr, c);
    // Equal counts: every lemma is a tie, no dominance group exists.
    CHECK(row.semantics.ties == 6);
    CHECK_FALSE(row.semantics.nvs.has_value());
    CHECK(*row.semantics.noun_variation == *row.semantics.verb_variation);
    REQUIRE(row.semantics.class_variation_test.has_value());
    CHECK(row.semantics.class_variation_test->statistic == 0.0);
    CHECK(row.semantics.class_variation_test->p_value == 1.0);
}

TEST_CASE("store and corpus must agree") {
    const auto fixture = fs::path(FLEXLEX_TEST_DATA) / "french_voyage.conllu";
    SynthSpec spec;
    const auto store = synth_store(spec);
    RunConfig c;
    const auto census = census_corpus(parse_conllu_file(fixture, "fr"), c.flexibility, c.gates);
    CHECK_THROWS_AS(language_metrics("fr", store, &census, c), ConfigError);

    const auto dir = scratch("mismatch");
    write_store_file(store, dir / "s.wcf");
    RunConfig m;
    m.stores["fr"] = dir / "s.wcf";
    m.corpora["en"] = {fixture};
    CHECK_THROWS_AS(run_metrics(m), ConfigError);
}

TEST_CASE("census rows per language") {
    const auto fixture = fs::path(FLEXLEX_TEST_DATA) / "french_voyage.conllu";
    RunConfig c;
    c.corpora["fr"] = {fixture};
    c.corpora["qq"] = {fixture};
    const auto rows = run_census(c);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].language == "fr");
    CHECK(rows[1].language == "qq");
    CHECK(rows[0].token_count == 17);
    CHECK(rows[0].noun_lemmas == rows[1].noun_lemmas);
    CHECK(rows[0].noun_flexibility == rows[1].noun_flexibility);
    CHECK_FALSE(rows[0].included);  // far below the token gate

    c.gates.min_tokens = 10;
    c.gates.min_flexibility = 0.0;
    c.flexibility.min_total = 5;
    CHECK(run_census(c)[0].included);

    c.flexibility.min_minority_frac = 1.5;
    CHECK_THROWS_AS(run_census(c), ConfigError);
}

TEST_CASE("PCA plot output") {
    const auto dir = scratch("pca");
    SynthSpec spec;
    spec.lemma_count = 1;
    spec.noun_count = 40;
    spec.verb_count = 35;
    spec.dimension = 10;
    spec.class_offset = 25.0;
    const auto rec = synth_store(spec).records[0];
    const auto p = emit_pca_plot(rec, dir / "plot");
    std::ifstream tsv(dir / "plot.tsv");
    std::string line;
    std::size_t lines = 0;
    while (std::getline(tsv, line)) ++lines;
    CHECK(lines == 1 + 75);
    CHECK(fs::exists(dir / "plot.svg"));

    // Well separated clouds split on the first axis.
    double noun_max = -1e300, verb_min = 1e300, noun_min = 1e300, verb_max = -1e300;
    for (std::size_t i = 0; i < p.points.size(); ++i) {
        const double x = p.points[i][0];
        if (p.class_labels[i] == "noun") noun_max = std::max(noun_max, x), noun_min = std::min(noun_min, x);
        else verb_min = std::min(verb_min, x), verb_max = std::max(verb_max, x);
    }
    CHECK((noun_max < verb_min || verb_max < noun_min));
    CHECK_THROWS_AS(project_record({"e", VectorSet(3), VectorSet(3, {1, 2, 3})}), EmptyClassError);
}
