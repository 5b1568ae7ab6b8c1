#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "flexlex/census.hpp"
#include "flexlex/conllu.hpp"
#include "flexlex/embedding_store.hpp"
#include "flexlex/error.hpp"
#include "flexlex/lemma_merge.hpp"
#include "flexlex/pipeline.hpp"
#include "flexlex/probe.hpp"
#include "flexlex/semantic_metrics.hpp"
#include "flexlex/stats.hpp"

namespace py = pybind11;
using namespace flexlex;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

py::array_t<float> to_numpy(const VectorSet& s) {
    py::array_t<float> out({static_cast<py::ssize_t>(s.size()), static_cast<py::ssize_t>(s.dimension())});
    std::copy(s.data().begin(), s.data().end(), out.mutable_data());
    return out;
}

VectorSet from_numpy(const FloatArray& a, std::size_t dimension) {
    if (a.ndim() == 1 && a.shape(0) == 0) return VectorSet(dimension);
    if (a.ndim() != 2) throw py::value_error("vectors must be a 2-D array (count, dimension)");
    if (static_cast<std::size_t>(a.shape(1)) != dimension && a.shape(0) > 0)
        throw py::value_error("vector width does not match the store dimension");
    return VectorSet(dimension, std::vector<float>(a.data(), a.data() + a.size()));
}

std::size_t width_of(const FloatArray& a) { return a.ndim() == 2 ? static_cast<std::size_t>(a.shape(1)) : 0; }

py::dict test_dict(const std::optional<stats::TestResult>& t) {
    py::dict d;
    if (!t) return d;
    d["statistic"] = t->statistic;
    d["df"] = t->degrees_of_freedom;
    d["p_value"] = t->p_value;
    d["stars"] = std::string(stats::to_string(t->stars));
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Word class flexibility census and contextual semantic metrics";

    auto base = py::register_exception<Error>(m, "FlexlexError");
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    auto data = py::register_exception<DataError>(m, "DataError", base.ptr());
    py::register_exception<MalformedRecordError>(m, "MalformedRecordError", data.ptr());
    py::register_exception<EncodingError>(m, "EncodingError", data.ptr());
    py::register_exception<UnrecognizedFormatError>(m, "UnrecognizedFormatError", data.ptr());
    py::register_exception<CorruptionError>(m, "CorruptionError", data.ptr());
    py::register_exception<EmptyClassError>(m, "EmptyClassError", data.ptr());
    py::register_exception<UndefinedCosineError>(m, "UndefinedCosineError", data.ptr());
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", data.ptr());
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", data.ptr());

    py::class_<Token>(m, "Token")
        .def_readonly("form", &Token::form)
        .def_readonly("lemma", &Token::lemma)
        .def_readonly("upos", &Token::upos)
        .def_readonly("sentence_index", &Token::sentence_index)
        .def_readonly("token_index", &Token::token_index)
        .def("__repr__", [](const Token& t) { return "<Token " + t.form + "/" + t.lemma + "/" + t.upos + ">"; });

    py::class_<TaggedCorpus>(m, "TaggedCorpus")
        .def_property_readonly("language", &TaggedCorpus::language_code)
        .def_property_readonly("sentences", &TaggedCorpus::sentences)
        .def_property_readonly("token_count", &TaggedCorpus::token_count);

    m.def("parse_conllu", [](const std::string& text, std::string lang) { return parse_conllu(std::string_view(text), lang); },
          py::arg("text"), py::arg("language") = "");
    m.def(
        "load_corpus",
        [](const std::vector<std::filesystem::path>& paths, std::string lang) { return load_corpus(paths, std::move(lang)); },
        py::arg("paths"), py::arg("language"));

    py::class_<LemmaCluster>(m, "LemmaCluster")
        .def_readonly("representative", &LemmaCluster::representative)
        .def_readonly("members", &LemmaCluster::members);
    py::class_<ClusterSet>(m, "ClusterSet")
        .def("resolve", &ClusterSet::resolve)
        .def("__contains__", &ClusterSet::contains)
        .def_property_readonly("cluster_count", &ClusterSet::cluster_count)
        .def("clusters", &ClusterSet::clusters);
    m.def("build_clusters", &build_clusters);

    py::class_<FlexibilityThresholds>(m, "FlexibilityThresholds")
        .def(py::init<>())
        .def(py::init([](std::uint64_t min_total, double frac) { return FlexibilityThresholds{min_total, frac}; }),
             py::arg("min_total") = 10, py::arg("min_minority_frac") = 0.05)
        .def_readwrite("min_total", &FlexibilityThresholds::min_total)
        .def_readwrite("min_minority_frac", &FlexibilityThresholds::min_minority_frac);
    py::class_<InclusionGates>(m, "InclusionGates")
        .def(py::init([](std::uint64_t tokens, double flex) { return InclusionGates{tokens, flex}; }),
             py::arg("min_tokens") = 100000, py::arg("min_flexibility") = 0.025)
        .def_readwrite("min_tokens", &InclusionGates::min_tokens)
        .def_readwrite("min_flexibility", &InclusionGates::min_flexibility);

    py::class_<FlexibilityRecord>(m, "FlexibilityRecord")
        .def_property_readonly("cluster", [](const FlexibilityRecord& r) { return r.counts.cluster; })
        .def_property_readonly("noun_count", [](const FlexibilityRecord& r) { return r.counts.noun_count; })
        .def_property_readonly("verb_count", [](const FlexibilityRecord& r) { return r.counts.verb_count; })
        .def_readonly("flexible", &FlexibilityRecord::flexible)
        .def_property_readonly("dominant", [](const FlexibilityRecord& r) { return std::string(to_string(r.dominant)); });

    py::class_<LanguageCensus>(m, "LanguageCensus")
        .def_readonly("language", &LanguageCensus::language)
        .def_readonly("token_count", &LanguageCensus::token_count)
        .def_readonly("noun_lemmas", &LanguageCensus::noun_lemmas)
        .def_readonly("verb_lemmas", &LanguageCensus::verb_lemmas)
        .def_readonly("flexible_noun_lemmas", &LanguageCensus::flexible_noun_lemmas)
        .def_readonly("flexible_verb_lemmas", &LanguageCensus::flexible_verb_lemmas)
        .def_readonly("noun_flexibility", &LanguageCensus::noun_flexibility)
        .def_readonly("verb_flexibility", &LanguageCensus::verb_flexibility)
        .def_readonly("included", &LanguageCensus::included)
        .def_readonly("degenerate", &LanguageCensus::degenerate);

    m.def(
        "census",
        [](const TaggedCorpus& corpus, const FlexibilityThresholds& t, const InclusionGates& g) {
            auto c = census_corpus(corpus, t, g);
            return py::make_tuple(c.census, c.records);
        },
        py::arg("corpus"), py::arg("thresholds") = FlexibilityThresholds{}, py::arg("gates") = InclusionGates{},
        "Returns (LanguageCensus, [FlexibilityRecord]).");

    py::class_<EmbeddingRecord>(m, "EmbeddingRecord")
        .def(py::init([](std::string key, const FloatArray& nouns, const FloatArray& verbs) {
                 const std::size_t d = std::max(width_of(nouns), width_of(verbs));
                 return EmbeddingRecord{std::move(key), from_numpy(nouns, d), from_numpy(verbs, d)};
             }),
             py::arg("cluster_key"), py::arg("noun_vectors"), py::arg("verb_vectors"))
        .def_readonly("cluster_key", &EmbeddingRecord::cluster_key)
        .def_property_readonly("noun_vectors", [](const EmbeddingRecord& r) { return to_numpy(r.noun_vectors); })
        .def_property_readonly("verb_vectors", [](const EmbeddingRecord& r) { return to_numpy(r.verb_vectors); });

    py::class_<EmbeddingStore>(m, "EmbeddingStore")
        .def(py::init([](std::uint32_t dimension, std::string label, std::vector<EmbeddingRecord> records) {
                 for (auto& r : records) {
                     if (r.noun_vectors.empty()) r.noun_vectors = VectorSet(dimension);
                     if (r.verb_vectors.empty()) r.verb_vectors = VectorSet(dimension);
                 }
                 return EmbeddingStore{dimension, std::move(label), std::move(records)};
             }),
             py::arg("dimension"), py::arg("layer_label") = "", py::arg("records") = std::vector<EmbeddingRecord>{})
        .def_readonly("dimension", &EmbeddingStore::dimension)
        .def_readonly("layer_label", &EmbeddingStore::layer_label)
        .def_readonly("records", &EmbeddingStore::records)
        .def("__len__", [](const EmbeddingStore& s) { return s.records.size(); })
        .def("__eq__", [](const EmbeddingStore& a, const EmbeddingStore& b) { return a == b; });

    m.def("read_store", &read_store_file, py::arg("path"));
    m.def("write_store", &write_store_file, py::arg("store"), py::arg("path"));
    m.def("encode_store", [](const EmbeddingStore& s) {
        const auto bytes = encode_store(s);
        return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    });
    m.def("decode_store", [](const py::bytes& b) {
        const std::string s = b;
        return decode_store(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
    });

    m.def(
        "synth_store",
        [](std::size_t lemmas, std::size_t nouns, std::size_t verbs, std::uint32_t dim, double offset,
           std::uint64_t seed, bool alternate, std::string label) {
            return synth_store(SynthSpec{lemmas, nouns, verbs, dim, offset, seed, alternate, std::move(label)});
        },
        py::arg("lemmas") = 10, py::arg("nouns") = 40, py::arg("verbs") = 30, py::arg("dimension") = 8,
        py::arg("offset") = 0.0, py::arg("seed") = 0, py::arg("alternate") = false,
        py::arg("layer_label") = "synthetic");

    py::class_<LemmaSemantics>(m, "LemmaSemantics")
        .def_readonly("cluster_key", &LemmaSemantics::cluster_key)
        .def_readonly("noun_variation", &LemmaSemantics::noun_variation)
        .def_readonly("verb_variation", &LemmaSemantics::verb_variation)
        .def_readonly("shift", &LemmaSemantics::shift)
        .def_readonly("noun_sample_size", &LemmaSemantics::noun_sample_size)
        .def_readonly("verb_sample_size", &LemmaSemantics::verb_sample_size)
        .def_property_readonly("dominant", [](const LemmaSemantics& l) { return std::string(to_string(l.dominant)); });

    m.def(
        "lemma_semantics",
        [](const EmbeddingRecord& r, std::uint64_t seed, bool downsample_prototypes) {
            return lemma_semantics(r, dominance_of(r.noun_vectors.size(), r.verb_vectors.size()),
                                   MetricsOptions{seed, downsample_prototypes});
        },
        py::arg("record"), py::arg("seed") = 0, py::arg("downsample_prototypes") = false,
        "Dominance is taken from the record's own vector counts.");

    m.def(
        "language_metrics",
        [](const EmbeddingStore& store, std::uint64_t seed, std::size_t min_class_count, unsigned threads) {
            RunConfig c;
            c.seed = seed;
            c.min_class_count = min_class_count;
            c.threads = threads;
            const auto row = language_metrics("", store, nullptr, c);
            const auto& s = row.semantics;
            py::dict d;
            d["lemmas"] = s.lemma_count;
            d["noun_dominant"] = s.noun_dominant;
            d["verb_dominant"] = s.verb_dominant;
            d["ties"] = s.ties;
            d["nvs"] = s.nvs;
            d["vns"] = s.vns;
            d["noun_variation"] = s.noun_variation;
            d["verb_variation"] = s.verb_variation;
            d["majority_variation"] = s.majority_variation;
            d["minority_variation"] = s.minority_variation;
            d["shift_test"] = test_dict(s.shift_test);
            d["class_variation_test"] = test_dict(s.class_variation_test);
            d["dominance_variation_test"] = test_dict(s.dominance_variation_test);
            d["diagnostics"] = row.diagnostics;
            return d;
        },
        py::arg("store"), py::arg("seed") = 0, py::arg("min_class_count") = 30, py::arg("threads") = 0);

    m.def("metrics_tsv", [](const std::map<std::string, std::filesystem::path>& stores, std::uint64_t seed,
                            bool full_precision) {
        RunConfig c;
        c.stores = stores;
        c.seed = seed;
        std::ostringstream out;
        write_metrics_tsv(run_metrics(c), out, full_precision);
        return out.str();
    }, py::arg("stores"), py::arg("seed") = 0, py::arg("full_precision") = false);

    auto st = m.def_submodule("stats");
    auto as_dict = [](const stats::TestResult& t) { return test_dict(t); };
    st.def("spearman", [as_dict](std::vector<double> a, std::vector<double> b) { return as_dict(stats::spearman(a, b)); });
    st.def("unpaired_t", [as_dict](std::vector<double> a, std::vector<double> b) { return as_dict(stats::unpaired_t(a, b)); });
    st.def("paired_t", [as_dict](std::vector<double> a, std::vector<double> b) {
        return as_dict(stats::paired_t(std::span<const double>(a), std::span<const double>(b)));
    });
    st.def("pca2", [](const std::vector<std::vector<double>>& rows) {
        const auto p = stats::pca2(rows);
        py::dict d;
        d["points"] = p.points;
        d["explained_variance"] = p.explained_variance;
        d["axes"] = p.axes;
        d["diagnostic"] = p.diagnostic;
        return d;
    });

    py::class_<HumanRating>(m, "HumanRating")
        .def_readonly("word", &HumanRating::word)
        .def_readonly("noun_occurrences", &HumanRating::noun_occurrences)
        .def_readonly("verb_occurrences", &HumanRating::verb_occurrences)
        .def_readonly("human_sim", &HumanRating::human_sim);
    m.def("load_ratings", &load_ratings_file, py::arg("path"));
    m.def("model_similarity", &model_similarity);
    m.def(
        "correlate_layer",
        [](const EmbeddingStore& s, const std::vector<HumanRating>& r) {
            const auto c = correlate_layer(s, r);
            return py::make_tuple(c.rho, c.n_words, c.dropped);
        },
        "Returns (rho, n_words, dropped_words).");
}
