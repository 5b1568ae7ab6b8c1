#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "flexlex/census.hpp"
#include "flexlex/error.hpp"
#include "oracles.hpp"

using namespace flexlex;

namespace {

FlexibilityRecord rec(std::uint64_t n, std::uint64_t v, bool flexible) {
    return FlexibilityRecord{{"k", n, v}, flexible, dominance_of(n, v)};
}

std::vector<FlexibilityRecord> synthetic_records(std::uint64_t nouns, std::uint64_t flexible_nouns,
                                                 std::uint64_t verbs, std::uint64_t flexible_verbs) {
    std::vector<FlexibilityRecord> out;
    for (std::uint64_t i = 0; i < nouns; ++i) out.push_back(rec(10, i < flexible_nouns ? 2 : 0, i < flexible_nouns));
    for (std::uint64_t i = 0; i < verbs; ++i) out.push_back(rec(i < flexible_verbs ? 2 : 0, 10, i < flexible_verbs));
    return out;
}

}  // namespace

TEST_CASE("counts on the french fixture") {
    const auto corpus = parse_conllu_file(std::string(FLEXLEX_TEST_DATA) + "/french_voyage.conllu", "fr");
    const auto counts = count_classes(corpus, build_clusters(corpus));
    // {dure, durer} (1 verb) and voyage (3 nouns, 2 verbs).
    REQUIRE(counts.size() == 2);
    CHECK(counts[0] == ClassCounts{"dure", 0, 1});
    CHECK(counts[1] == ClassCounts{"voyage", 3, 2});
}

TEST_CASE("no noun or verb tokens gives no records") {
    const auto corpus = parse_conllu(std::string_view("1\tet\tet\tCCONJ\t_\t_\t_\t_\t_\t_\n"));
    CHECK(count_classes(corpus, build_clusters(corpus)).empty());
}

TEST_CASE("counts ignore sentence order") {
    auto corpus = oracle::random_corpus({3000, 200, 90, 7});
    auto sentences = corpus.sentences();
    std::mt19937_64 eng(3);
    std::shuffle(sentences.begin(), sentences.end(), eng);
    const TaggedCorpus shuffled("xx", sentences);
    CHECK(count_classes(corpus, build_clusters(corpus)) == count_classes(shuffled, build_clusters(shuffled)));
}

TEST_CASE("classification thresholds") {
    const auto a = classify({"a", 100, 0});
    CHECK_FALSE(a.flexible);
    CHECK(a.dominant == Dominance::Noun);

    const auto b = classify({"b", 19, 1});  // exactly 5% minority of 20
    CHECK(b.flexible);
    CHECK(b.dominant == Dominance::Noun);

    const auto c = classify({"c", 12, 3});
    CHECK(c.flexible);
    CHECK(c.dominant == Dominance::Noun);

    CHECK_FALSE(classify({"d", 5, 4}).flexible);  // below 10 occurrences
    CHECK(classify({"e", 5, 5}).dominant == Dominance::Tie);
    CHECK(classify({"f", 3, 30}).dominant == Dominance::Verb);
    CHECK_FALSE(classify({"g", 39, 2}).flexible);  // 4.9%
}

TEST_CASE("classification rejects bad thresholds") {
    CHECK_THROWS_AS(classify({"a", 1, 1}, {0, 0.05}), ConfigError);
    CHECK_THROWS_AS(classify({"a", 1, 1}, {10, 0.6}), ConfigError);
    CHECK_THROWS_AS(classify({"a", 1, 1}, {10, -0.1}), ConfigError);
}

TEST_CASE("minority fraction never drops when a verb is added to a noun-dominant cluster") {
    for (std::uint64_t n = 1; n < 60; ++n)
        for (std::uint64_t v = 0; v < n; ++v) {
            const double before = double(std::min(n, v)) / double(n + v);
            const double after = double(std::min(n, v + 1)) / double(n + v + 1);
            CHECK(after >= before);
            if (classify({"x", n, v}).flexible && v + 1 < n) CHECK(classify({"x", n, v + 1}).flexible);
        }
}

TEST_CASE("language census at corpus scale") {
    SUBCASE("English is included") {
        // 422 / 1700 = 0.248, 283 / 600 = 0.472 (to three places).
        const auto c = language_census(synthetic_records(1700, 422, 600, 283), 4'000'000);
        CHECK(c.noun_lemmas == 1700);
        CHECK(c.verb_lemmas == 600);
        CHECK(c.noun_flexibility == doctest::Approx(0.248).epsilon(0.0005 / 0.248));
        CHECK(c.verb_flexibility == doctest::Approx(0.472).epsilon(0.0005 / 0.472));
        CHECK(c.included);
        CHECK_FALSE(c.degenerate);
    }
    SUBCASE("Czech is excluded") {
        const auto c = language_census(synthetic_records(5468, 22, 2063, 23), 2'000'000);
        CHECK(std::round(c.noun_flexibility * 1000) == 4);
        CHECK(std::round(c.verb_flexibility * 1000) == 11);
        CHECK_FALSE(c.included);
    }
    SUBCASE("small corpus fails the token gate") {
        CHECK_FALSE(language_census(synthetic_records(100, 50, 100, 50), 99'999).included);
        CHECK(language_census(synthetic_records(100, 50, 100, 50), 100'000).included);
    }
}

TEST_CASE("one flexible noun-dominant cluster is degenerate") {
    const auto c = language_census({rec(12, 3, true)}, 10);
    CHECK(c.noun_flexibility == 1.0);
    CHECK(c.verb_flexibility == 0.0);
    CHECK(c.degenerate);
    CHECK_FALSE(c.included);
}

TEST_CASE("ties are in neither denominator") {
    const auto c = language_census({rec(6, 6, true), rec(30, 3, true), rec(1, 20, false)}, 10);
    CHECK(c.noun_lemmas == 1);
    CHECK(c.verb_lemmas == 1);
    CHECK(c.noun_flexibility == 1.0);
    CHECK(c.verb_flexibility == 0.0);
}

TEST_CASE("census matches the brute-force oracle") {
    for (std::uint64_t seed = 11; seed < 21; ++seed) {
        const auto corpus = oracle::random_corpus({5000, 250, 100, seed});
        const auto expected = oracle::census(corpus);
        const auto clusters = build_clusters(corpus);
        const auto records = classify_all(count_classes(corpus, clusters));
        REQUIRE(records.size() == expected.counts.size());
        for (const auto& r : records) {
            const auto& [n, v] = expected.counts.at(r.counts.cluster);
            CHECK(r.counts.noun_count == n);
            CHECK(r.counts.verb_count == v);
            CHECK(r.flexible == expected.flexible.at(r.counts.cluster));
        }
        const auto c = language_census(records, corpus.token_count());
        CHECK(c.noun_lemmas == expected.noun_lemmas);
        CHECK(c.verb_lemmas == expected.verb_lemmas);
        CHECK(c.noun_flexibility == expected.noun_flexibility);
        CHECK(c.verb_flexibility == expected.verb_flexibility);
    }
}

TEST_CASE("census TSV layout") {
    LanguageCensus en;
    en.language = "en";
    en.noun_lemmas = 1700;
    en.verb_lemmas = 600;
    en.noun_flexibility = 422.0 / 1700.0;
    en.verb_flexibility = 283.0 / 600.0;
    en.included = true;
    std::ostringstream out;
    write_census_tsv({en}, out);
    CHECK(out.str() ==
          "language\tnouns\tverbs\tnoun_flexibility\tverb_flexibility\tincluded\n"
          "en\t1700\t600\t0.248235\t0.471667\ttrue\n");
}
