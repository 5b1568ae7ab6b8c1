#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flexlex {

struct Token {
    std::string form;
    std::string lemma;  // "_" when the treebank leaves it unannotated
    std::string upos;
    std::size_t sentence_index = 0;
    std::size_t token_index = 0;  // ordinal within the sentence, from 0

    // Key used for lemma merging: the lemma, or the form when the lemma is absent.
    const std::string& lemma_key() const { return lemma == "_" ? form : lemma; }

    bool operator==(const Token&) const = default;
};

using Sentence = std::vector<Token>;

// Immutable once built. Sentences appear in file order.
class TaggedCorpus {
public:
    TaggedCorpus() = default;
    TaggedCorpus(std::string language_code, std::vector<Sentence> sentences);

    const std::string& language_code() const { return language_code_; }
    const std::vector<Sentence>& sentences() const { return sentences_; }
    std::size_t token_count() const { return token_count_; }

    bool operator==(const TaggedCorpus&) const = default;

private:
    std::string language_code_;
    std::vector<Sentence> sentences_;
    std::size_t token_count_ = 0;
};

bool is_universal_pos(std::string_view tag);

TaggedCorpus parse_conllu(std::istream& in, std::string language_code = {});
TaggedCorpus parse_conllu(std::string_view text, std::string language_code = {});
TaggedCorpus parse_conllu_file(const std::filesystem::path& path, std::string language_code = {});

// Concatenates in the given order; sentence indices are renumbered.
TaggedCorpus concatenate(std::span<const TaggedCorpus> parts, std::string language_code);

// Reads every path (directories expand to their *.conllu files) and concatenates them in
// lexicographic file-name order.
TaggedCorpus load_corpus(std::span<const std::filesystem::path> paths, std::string language_code);

inline std::size_t count_tokens(const TaggedCorpus& corpus) { return corpus.token_count(); }

// Minimal CoNLL-U: ID, FORM, LEMMA and UPOS filled, other columns "_".
void write_conllu(const TaggedCorpus& corpus, std::ostream& out);

}  // namespace flexlex
