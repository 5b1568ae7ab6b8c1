#include <fstream>
#include <sstream>

#include "doctest.h"
#include "flexlex/conllu.hpp"
#include "flexlex/error.hpp"
#include "oracles.hpp"

using namespace flexlex;

namespace {
const std::string kFixture = std::string(FLEXLEX_TEST_DATA) + "/french_voyage.conllu";
}

TEST_CASE("empty input gives an empty corpus") {
    const auto c = parse_conllu(std::string_view(""));
    CHECK(c.sentences().empty());
    CHECK(count_tokens(c) == 0);
}

TEST_CASE("french fixture parses to two sentences and seventeen tokens") {
    const auto c = parse_conllu_file(kFixture, "fr");
    REQUIRE(c.sentences().size() == 2);
    CHECK(c.token_count() == 17);
    CHECK(c.language_code() == "fr");
    const Token& verb = c.sentences()[0][1];
    CHECK(verb.form == "voyage");
    CHECK(verb.lemma == "voyager");
    CHECK(verb.upos == "VERB");
    const Token& noun = c.sentences()[0][4];
    CHECK(noun.form == "voyage");
    CHECK(noun.lemma == "voyage");
    CHECK(noun.upos == "NOUN");
    // The "5-6 au" range line is skipped but its word lines are kept.
    const auto& s2 = c.sentences()[1];
    REQUIRE(s2.size() == 10);
    CHECK(s2[4].form == "à");
    CHECK(s2[5].form == "le");
    for (std::size_t i = 0; i < s2.size(); ++i) {
        CHECK(s2[i].token_index == i);
        CHECK(s2[i].sentence_index == 1);
    }
}

TEST_CASE("multiword ranges and empty nodes are excluded from the count") {
    const std::string text =
        "1\tdu\tde\tADP\t_\t_\t_\t_\t_\t_\n"
        "2-3\tau\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "2\tà\tà\tADP\t_\t_\t_\t_\t_\t_\n"
        "3\tle\tle\tDET\t_\t_\t_\t_\t_\t_\n"
        "3.1\tvoit\tvoir\tVERB\t_\t_\t_\t_\t_\t_\n";
    const auto c = parse_conllu(std::string_view(text));
    CHECK(c.token_count() == 3);
}

TEST_CASE("malformed and mis-encoded lines raise errors with line numbers") {
    SUBCASE("too few columns") {
        const std::string text = "# c\n1\tvoyage\tvoyager\tVERB\t_\n";
        try {
            parse_conllu(std::string_view(text));
            FAIL("expected MalformedRecordError");
        } catch (const MalformedRecordError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("invalid utf-8") {
        const std::string text = "1\tvoy\xFFge\tvoyager\tVERB\t_\t_\t_\t_\t_\t_\n";
        CHECK_THROWS_AS(parse_conllu(std::string_view(text)), EncodingError);
    }
    SUBCASE("unknown tag") {
        const std::string text = "1\tx\tx\tNN\t_\t_\t_\t_\t_\t_\n";
        CHECK_THROWS_AS(parse_conllu(std::string_view(text)), MalformedRecordError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(parse_conllu_file("/nonexistent/x.conllu"), IoError);
    }
}

TEST_CASE("CRLF line endings and a missing trailing blank line") {
    const std::string text = "1\ta\ta\tNOUN\t_\t_\t_\t_\t_\t_\r\n\r\n1\tb\tb\tVERB\t_\t_\t_\t_\t_\t_";
    const auto c = parse_conllu(std::string_view(text));
    REQUIRE(c.sentences().size() == 2);
    CHECK(c.sentences()[1][0].upos == "VERB");
}

TEST_CASE("round trip through minimal CoNLL-U and determinism") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto corpus = oracle::random_corpus({400, 60, 30, seed});
        std::ostringstream out;
        write_conllu(corpus, out);
        const auto again = parse_conllu(std::string_view(out.str()), "xx");
        CHECK(again == corpus);
        CHECK(parse_conllu(std::string_view(out.str()), "xx") == again);
    }
}

TEST_CASE("concatenation adds counts and load_corpus orders files by name") {
    const auto a = parse_conllu_file(kFixture, "fr");
    const std::vector<TaggedCorpus> parts{a, a};
    const auto both = concatenate(parts, "fr");
    CHECK(both.token_count() == 34);
    CHECK(both.sentences()[3][0].sentence_index == 3);

    const auto dir = std::filesystem::temp_directory_path() / "flexlex_load_corpus";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "b.conllu") << "1\tsecond\tsecond\tNOUN\t_\t_\t_\t_\t_\t_\n";
        std::ofstream(dir / "a.conllu") << "1\tfirst\tfirst\tNOUN\t_\t_\t_\t_\t_\t_\n";
        std::ofstream(dir / "ignored.txt") << "garbage";
    }
    const std::vector<std::filesystem::path> paths{dir};
    const auto merged = load_corpus(paths, "xx");
    REQUIRE(merged.sentences().size() == 2);
    CHECK(merged.sentences()[0][0].form == "first");
    CHECK(merged.sentences()[1][0].form == "second");
    std::filesystem::remove_all(dir);
}
