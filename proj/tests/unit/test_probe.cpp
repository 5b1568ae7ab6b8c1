#include <cmath>
#include <sstream>

#include "doctest.h"
#include "flexlex/error.hpp"
#include "flexlex/probe.hpp"
#include "oracles.hpp"

using namespace flexlex;

namespace {

// One noun vector (1, 0) and one verb vector at cosine c, so the model distance is exactly 1 - c.
EmbeddingRecord at_cosine(std::string key, double c) {
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    return {std::move(key), VectorSet(2, {1.0f, 0.0f}), VectorSet(2, {float(c), float(s)})};
}

std::vector<HumanRating> ratings_for(const std::vector<std::pair<std::string, double>>& rows) {
    std::vector<HumanRating> out;
    for (const auto& [w, s] : rows) out.push_back({w, 10, 10, s});
    return out;
}

}  // namespace

TEST_CASE("bundled ratings file") {
    const auto r = load_ratings_file(FLEXLEX_RATINGS);
    CHECK(r.size() == 138);
    auto find = [&](const std::string& w) {
        return *std::find_if(r.begin(), r.end(), [&](const HumanRating& h) { return h.word == w; });
    };
    CHECK(find("aim") == HumanRating{"aim", 137, 98, 2.0});
    CHECK(find("ring") == HumanRating{"ring", 185, 387, 0.0});
    for (const auto& h : r) {
        CHECK(h.human_sim >= 0.0);
        CHECK(h.human_sim <= 2.0);
    }
}

TEST_CASE("ratings validation") {
    auto load = [](const std::string& s) {
        std::istringstream in(s);
        return load_ratings(in);
    };
    const std::string header = "word\tnoun_count\tverb_count\thuman_sim\n";
    CHECK(load(header + "aim\t137\t98\t2.0\n").size() == 1);
    CHECK_THROWS_AS(load(header + "aim\t137\t98\t2.5\n"), DataError);
    CHECK_THROWS_AS(load(header + "aim\t137\t98\t-0.1\n"), DataError);
    CHECK_THROWS_AS(load(header + "aim\t0\t98\t1\n"), DataError);
    CHECK_THROWS_AS(load(header + "aim\t1\t9\t1\naim\t1\t9\t1\n"), DataError);
    CHECK_THROWS_AS(load(header + "aim\t1\t9\n"), DataError);
    CHECK_THROWS_AS(load(header + "aim\tx\t9\t1\n"), DataError);
    CHECK_THROWS_AS(load("word\tnouns\tverbs\tsim\n"), DataError);
    CHECK_THROWS_AS(load(""), DataError);
    CHECK_THROWS_AS(load_ratings_file("/nonexistent/ratings.tsv"), IoError);
}

TEST_CASE("model similarity") {
    CHECK(model_similarity(at_cosine("a", 1.0)) == doctest::Approx(0.0));
    CHECK(model_similarity(at_cosine("a", 0.0)) == doctest::Approx(1.0));
    CHECK(model_similarity(at_cosine("a", -1.0)) == doctest::Approx(2.0));
}

TEST_CASE("distance that falls exactly as similarity rises") {
    EmbeddingStore store;
    store.dimension = 2;
    std::vector<std::pair<std::string, double>> rows;
    for (int i = 0; i < 8; ++i) {
        const double sim = 0.25 * i;
        rows.emplace_back("w" + std::to_string(i), sim);
        store.records.push_back(at_cosine("w" + std::to_string(i), sim - 1.0));  // distance 2 - sim
    }
    const auto c = correlate_layer(store, ratings_for(rows), "L");
    CHECK(c.rho == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(c.n_words == 8);
    CHECK(c.dropped.empty());
}

TEST_CASE("constant model distances are degenerate") {
    EmbeddingStore store;
    store.dimension = 2;
    for (int i = 0; i < 5; ++i) store.records.push_back(at_cosine("w" + std::to_string(i), 0.5));
    CHECK_THROWS_AS(correlate_layer(store, ratings_for({{"w0", 0}, {"w1", 1}, {"w2", 2}, {"w3", 1.5}, {"w4", 0.5}})),
                    DegenerateInputError);
}

TEST_CASE("ten words with hand-computed ranks") {
    // Human ranks 1..10; distance ranks swapped in adjacent pairs, so sum d^2 = 10 and
    // rho = 1 - 6 * 10 / (10 * 99).
    const int distance_rank[10] = {2, 1, 4, 3, 6, 5, 8, 7, 10, 9};
    EmbeddingStore store;
    store.dimension = 2;
    std::vector<std::pair<std::string, double>> rows;
    for (int i = 0; i < 10; ++i) {
        const std::string w = "w" + std::to_string(i);
        rows.emplace_back(w, 0.1 * (i + 1));
        store.records.push_back(at_cosine(w, 1.0 - 0.15 * distance_rank[i]));
    }
    const auto c = correlate_layer(store, ratings_for(rows));
    CHECK(std::fabs(c.rho - (1.0 - 60.0 / 990.0)) < 1e-12);
}

TEST_CASE("pairwise drop and reorder invariance") {
    std::mt19937_64 eng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0), s(0.0, 2.0);
    EmbeddingStore store;
    store.dimension = 2;
    std::vector<std::pair<std::string, double>> rows;
    std::vector<double> model, human;
    for (int i = 0; i < 30; ++i) {
        const std::string w = "word" + std::to_string(i);
        const double c = u(eng), h = s(eng);
        rows.emplace_back(w, h);
        if (i % 4 == 3) continue;  // rated but missing from the store
        store.records.push_back(at_cosine(w, c));
        model.push_back(model_similarity(store.records.back()));
        human.push_back(h);
    }
    store.records.push_back(at_cosine("unrated", 0.3));
    const auto c = correlate_layer(store, ratings_for(rows));
    CHECK(c.n_words == model.size());
    CHECK(c.dropped.size() == 30 - model.size());
    CHECK(std::fabs(c.rho - oracle::spearman_rho(model, human)) < 1e-12);

    auto shuffled = ratings_for(rows);
    std::shuffle(shuffled.begin(), shuffled.end(), eng);
    std::reverse(store.records.begin(), store.records.end());
    CHECK(correlate_layer(store, shuffled).rho == c.rho);
}

TEST_CASE("words match case-insensitively") {
    EmbeddingStore store;
    store.dimension = 2;
    store.records = {at_cosine("Aim", 0.9), at_cosine("work", 0.5), at_cosine("RING", 0.1)};
    const auto c = correlate_layer(store, ratings_for({{"aim", 2.0}, {"Work", 1.6}, {"ring", 0.0}}));
    CHECK(c.n_words == 3);
    CHECK(c.rho == doctest::Approx(-1.0));
}

TEST_CASE("too few matched words") {
    EmbeddingStore store;
    store.dimension = 2;
    store.records = {at_cosine("a", 0.1), at_cosine("b", 0.5)};
    CHECK_THROWS_AS(correlate_layer(store, ratings_for({{"a", 1}, {"b", 2}, {"c", 0}})), InsufficientDataError);
}

TEST_CASE("natural label order") {
    CHECK(natural_less("layer2", "layer10"));
    CHECK_FALSE(natural_less("layer10", "layer2"));
    CHECK(natural_less("layer02", "layer3"));
    CHECK(natural_less("a", "b"));
    CHECK_FALSE(natural_less("x1", "x1"));
}

TEST_CASE("probe curve over layers with a static baseline") {
    std::vector<std::pair<std::string, double>> rows;
    for (int i = 0; i < 6; ++i) rows.emplace_back("w" + std::to_string(i), 0.3 * i);
    auto layer = [&](std::string label, double sign) {
        EmbeddingStore s;
        s.dimension = 2;
        s.layer_label = std::move(label);
        for (int i = 0; i < 6; ++i) s.records.push_back(at_cosine("w" + std::to_string(i), sign * (0.3 * i - 0.8)));
        return s;
    };
    const std::vector<EmbeddingStore> layers{layer("layer10", 1), layer("layer2", -1), layer("layer1", 1)};
    const auto base = layer("emb", 1);
    const auto curve = probe(layers, ratings_for(rows), &base);
    CHECK(curve.layer_labels == std::vector<std::string>{"layer1", "layer2", "layer10"});
    CHECK(curve.correlations[0] == doctest::Approx(-1.0));
    CHECK(curve.correlations[1] == doctest::Approx(1.0));
    REQUIRE(curve.baseline.has_value());
    CHECK(*curve.baseline == doctest::Approx(-1.0));

    std::ostringstream out;
    write_probe_tsv(curve, out);
    CHECK(out.str() ==
          "layer\trho\tabs_rho\tn_words\nlayer1\t-1\t1\t6\nlayer2\t1\t1\t6\nlayer10\t-1\t1\t6\nstatic\t-1\t1\t6\n");
}
