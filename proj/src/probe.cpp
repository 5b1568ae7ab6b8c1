#include "flexlex/probe.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "flexlex/error.hpp"
#include "flexlex/format.hpp"
#include "flexlex/semantic_metrics.hpp"
#include "flexlex/stats.hpp"
#include "flexlex/text.hpp"

namespace flexlex {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
        if (tab == std::string::npos) return out;
        start = tab + 1;
    }
}

template <typename T>
T parse_number(const std::string& field, std::size_t row, const char* column) {
    T value{};
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw DataError("ratings row " + std::to_string(row) + ": bad " + column + " '" + field + "'");
    return value;
}

}  // namespace

std::vector<HumanRating> load_ratings(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("ratings file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (split_fields(line) != std::vector<std::string>{"word", "noun_count", "verb_count", "human_sim"})
        throw DataError("ratings header must be: word, noun_count, verb_count, human_sim");

    std::vector<HumanRating> out;
    std::unordered_set<std::string> seen;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 4) throw DataError("ratings row " + std::to_string(row) + ": expected 4 fields");
        HumanRating r;
        r.word = f[0];
        if (r.word.empty() || !text::is_valid_utf8(r.word))
            throw DataError("ratings row " + std::to_string(row) + ": invalid word");
        r.noun_occurrences = parse_number<std::uint64_t>(f[1], row, "noun_count");
        r.verb_occurrences = parse_number<std::uint64_t>(f[2], row, "verb_count");
        r.human_sim = parse_number<double>(f[3], row, "human_sim");
        if (!(r.human_sim >= 0.0 && r.human_sim <= 2.0))
            throw DataError("ratings row " + std::to_string(row) + ": human_sim " + f[3] + " outside [0, 2]");
        if (r.noun_occurrences == 0 || r.verb_occurrences == 0)
            throw DataError("ratings row " + std::to_string(row) + ": occurrence counts must be positive");
        if (!seen.insert(r.word).second)
            throw DataError("ratings row " + std::to_string(row) + ": duplicate word '" + r.word + "'");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<HumanRating> load_ratings_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open ratings file: " + path.string());
    try {
        return load_ratings(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

double model_similarity(const EmbeddingRecord& record) {
    return cosine_distance(prototype(record.noun_vectors), prototype(record.verb_vectors));
}

LayerCorrelation correlate_layer(const EmbeddingStore& store, const std::vector<HumanRating>& ratings,
                                 std::string label) {
    LayerCorrelation out;
    out.layer = label.empty() ? store.layer_label : std::move(label);
    std::unordered_map<std::string, const EmbeddingRecord*> by_key;
    for (const auto& r : store.records) by_key.emplace(text::fold_case(r.cluster_key), &r);

    // Ordered by word so the result cannot depend on file order.
    std::map<std::string, double> human;
    for (const auto& r : ratings) human.emplace(text::fold_case(r.word), r.human_sim);

    std::vector<double> model_scores;
    std::vector<double> human_scores;
    for (const auto& [word, sim] : human) {
        auto it = by_key.find(word);
        if (it == by_key.end()) {
            out.dropped.push_back(word);
            continue;
        }
        try {
            model_scores.push_back(model_similarity(*it->second));
            human_scores.push_back(sim);
        } catch (const DataError&) {
            out.dropped.push_back(word);
        }
    }
    out.n_words = model_scores.size();
    if (out.n_words < 3)
        throw InsufficientDataError("layer '" + out.layer + "': only " + std::to_string(out.n_words) +
                                    " rated words matched");
    out.rho = stats::spearman(model_scores, human_scores).statistic;
    return out;
}

bool natural_less(const std::string& a, const std::string& b) {
    std::size_t i = 0;
    std::size_t j = 0;
    auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
    while (i < a.size() && j < b.size()) {
        if (is_digit(a[i]) && is_digit(b[j])) {
            std::size_t ie = i;
            std::size_t je = j;
            while (ie < a.size() && is_digit(a[ie])) ++ie;
            while (je < b.size() && is_digit(b[je])) ++je;
            std::string_view na(a.data() + i, ie - i);
            std::string_view nb(b.data() + j, je - j);
            while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
            while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
            if (na.size() != nb.size()) return na.size() < nb.size();
            if (na != nb) return na < nb;
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
    return a < b;
}

ProbeCurve probe(const std::vector<EmbeddingStore>& layer_stores, const std::vector<HumanRating>& ratings,
                 const EmbeddingStore* baseline_store) {
    std::vector<LayerCorrelation> layers;
    for (std::size_t i = 0; i < layer_stores.size(); ++i) {
        const auto& s = layer_stores[i];
        std::string label = s.layer_label.empty() ? "layer" + std::to_string(i) : s.layer_label;
        layers.push_back(correlate_layer(s, ratings, std::move(label)));
    }
    std::stable_sort(layers.begin(), layers.end(),
                     [](const LayerCorrelation& a, const LayerCorrelation& b) { return natural_less(a.layer, b.layer); });
    ProbeCurve curve;
    for (auto& l : layers) {
        if (!l.dropped.empty())
            curve.diagnostics.push_back("layer '" + l.layer + "': dropped " + std::to_string(l.dropped.size()) +
                                        " rated word(s) missing from the store");
        curve.layer_labels.push_back(l.layer);
        curve.correlations.push_back(l.rho);
        curve.word_counts.push_back(l.n_words);
    }
    if (baseline_store) {
        const auto b = correlate_layer(*baseline_store, ratings, "static");
        if (!b.dropped.empty())
            curve.diagnostics.push_back("static baseline: dropped " + std::to_string(b.dropped.size()) +
                                        " rated word(s) missing from the store");
        curve.baseline = b.rho;
        curve.baseline_words = b.n_words;
    }
    return curve;
}

void write_probe_tsv(const ProbeCurve& curve, std::ostream& out, bool full_precision) {
    out << "layer\trho\tabs_rho\tn_words\n";
    for (std::size_t i = 0; i < curve.layer_labels.size(); ++i) {
        out << curve.layer_labels[i] << '\t' << format_real(curve.correlations[i], full_precision) << '\t'
            << format_real(std::fabs(curve.correlations[i]), full_precision) << '\t' << curve.word_counts[i] << '\n';
    }
    if (curve.baseline) {
        out << "static\t" << format_real(*curve.baseline, full_precision) << '\t'
            << format_real(std::fabs(*curve.baseline), full_precision) << '\t' << curve.baseline_words << '\n';
    }
}

}  // namespace flexlex
