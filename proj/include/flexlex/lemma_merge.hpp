#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "flexlex/conllu.hpp"

namespace flexlex {

// Disjoint-set forest over dense ids, union by size with path halving.
class UnionFind {
public:
    std::size_t add();
    std::size_t find(std::size_t x);
    bool unite(std::size_t a, std::size_t b);
    std::size_t size() const { return parent_.size(); }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

struct LemmaCluster {
    std::string representative;        // lexicographically smallest member
    std::vector<std::string> members;  // sorted
};

// Finalized partition of case-folded keys. Immutable; resolve() is safe to call concurrently.
class ClusterSet {
public:
    // Folded representative of `key`; an unseen key is its own singleton cluster.
    std::string resolve(std::string_view key) const;
    const std::string* find_representative(std::string_view folded_key) const;

    bool contains(std::string_view key) const;
    std::size_t key_count() const { return keys_.size(); }
    std::size_t cluster_count() const { return cluster_count_; }

    // Sorted by representative.
    std::vector<LemmaCluster> clusters() const;

    // representative<TAB>comma-joined members, one line per cluster.
    void write_tsv(std::ostream& out) const;

private:
    friend class ClusterBuilder;

    std::vector<std::string> keys_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::size_t> representative_of_;  // key id -> key id of its representative
    std::size_t cluster_count_ = 0;
};

class ClusterBuilder {
public:
    // Unions the folded form with the folded lemma key. Forms made only of punctuation or digits
    // are skipped so they cannot bridge unrelated paradigms.
    void add_token(std::string_view form, std::string_view lemma_key);
    void add(const Token& token) { add_token(token.form, token.lemma_key()); }

    ClusterSet finish() &&;

private:
    std::size_t intern(std::string key);

    UnionFind forest_;
    std::vector<std::string> keys_;
    std::unordered_map<std::string, std::size_t> index_;
};

ClusterSet build_clusters(const TaggedCorpus& corpus);

}  // namespace flexlex
