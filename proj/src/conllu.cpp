#include "flexlex/conllu.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "flexlex/error.hpp"
#include "flexlex/text.hpp"

namespace flexlex {
namespace {

constexpr std::array<std::string_view, 17> kUniversalTags = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            cols.push_back(line.substr(start));
            return cols;
        }
        cols.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

bool is_plain_id(std::string_view id) {
    if (id.empty()) return false;
    return std::all_of(id.begin(), id.end(), [](char c) { return c >= '0' && c <= '9'; });
}

class Builder {
public:
    void add(std::string_view form, std::string_view lemma, std::string_view upos) {
        Token t;
        t.form = std::string(form);
        t.lemma = std::string(lemma);
        t.upos = std::string(upos);
        t.sentence_index = sentences_.size();
        t.token_index = current_.size();
        current_.push_back(std::move(t));
    }
    void end_sentence() {
        if (!current_.empty()) sentences_.push_back(std::move(current_));
        current_.clear();
    }
    std::vector<Sentence> finish() {
        end_sentence();
        return std::move(sentences_);
    }

private:
    std::vector<Sentence> sentences_;
    Sentence current_;
};

}  // namespace

TaggedCorpus::TaggedCorpus(std::string language_code, std::vector<Sentence> sentences)
    : language_code_(std::move(language_code)), sentences_(std::move(sentences)) {
    for (const auto& s : sentences_) token_count_ += s.size();
}

bool is_universal_pos(std::string_view tag) {
    return std::find(kUniversalTags.begin(), kUniversalTags.end(), tag) != kUniversalTags.end();
}

TaggedCorpus parse_conllu(std::istream& in, std::string language_code) {
    Builder builder;
    std::string line;
    std::size_t line_no = 0;
    long previous_id = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (auto bad = text::find_invalid_utf8(line))
            throw EncodingError(line_no, "invalid UTF-8 at column byte " + std::to_string(*bad));
        if (line.empty()) {
            builder.end_sentence();
            previous_id = 0;
            continue;
        }
        if (line.front() == '#') continue;

        const auto cols = split_tabs(line);
        if (cols.size() < 10)
            throw MalformedRecordError(line_no, "expected 10 tab-separated columns, found " +
                                                    std::to_string(cols.size()));
        const std::string_view id = cols[0];
        // Multiword ranges ("3-4") and empty nodes ("5.1") carry no tagged word of their own.
        if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) continue;
        if (!is_plain_id(id)) throw MalformedRecordError(line_no, "invalid token ID '" + std::string(id) + "'");
        long numeric_id = 0;
        std::from_chars(id.data(), id.data() + id.size(), numeric_id);
        if (numeric_id <= previous_id)
            throw MalformedRecordError(line_no, "token IDs must increase within a sentence");
        previous_id = numeric_id;

        const std::string_view form = cols[1];
        const std::string_view lemma = cols[2];
        const std::string_view upos = cols[3];
        if (form.empty()) throw MalformedRecordError(line_no, "empty FORM column");
        if (upos != "_" && !is_universal_pos(upos))
            throw MalformedRecordError(line_no, "unknown UPOS tag '" + std::string(upos) + "'");
        builder.add(form, lemma.empty() ? std::string_view("_") : lemma, upos);
    }
    return TaggedCorpus(std::move(language_code), builder.finish());
}

TaggedCorpus parse_conllu(std::string_view text, std::string language_code) {
    std::istringstream in{std::string(text)};
    return parse_conllu(in, std::move(language_code));
}

TaggedCorpus parse_conllu_file(const std::filesystem::path& path, std::string language_code) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open corpus file: " + path.string());
    try {
        return parse_conllu(in, std::move(language_code));
    } catch (const MalformedRecordError& e) {
        throw MalformedRecordError(e.line(), path.string() + ": " + e.what());
    } catch (const EncodingError& e) {
        throw EncodingError(e.line(), path.string() + ": " + e.what());
    }
}

TaggedCorpus concatenate(std::span<const TaggedCorpus> parts, std::string language_code) {
    std::vector<Sentence> all;
    for (const auto& part : parts) {
        for (const auto& s : part.sentences()) {
            Sentence copy = s;
            for (auto& t : copy) t.sentence_index = all.size();
            all.push_back(std::move(copy));
        }
    }
    return TaggedCorpus(std::move(language_code), std::move(all));
}

TaggedCorpus load_corpus(std::span<const std::filesystem::path> paths, std::string language_code) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& p : paths) {
        std::error_code ec;
        if (fs::is_directory(p, ec)) {
            for (const auto& entry : fs::directory_iterator(p)) {
                if (entry.is_regular_file() && entry.path().extension() == ".conllu") files.push_back(entry.path());
            }
        } else if (fs::exists(p, ec)) {
            files.push_back(p);
        } else {
            throw IoError("corpus path not found: " + p.string());
        }
    }
    std::stable_sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
        return a.filename().string() < b.filename().string();
    });
    std::vector<TaggedCorpus> parts;
    parts.reserve(files.size());
    for (const auto& f : files) parts.push_back(parse_conllu_file(f, language_code));
    return concatenate(parts, std::move(language_code));
}

void write_conllu(const TaggedCorpus& corpus, std::ostream& out) {
    for (const auto& sentence : corpus.sentences()) {
        for (const auto& t : sentence) {
            out << (t.token_index + 1) << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos
                << "\t_\t_\t_\t_\t_\t_\n";
        }
        out << '\n';
    }
}

}  // namespace flexlex
