#include "flexlex/lemma_merge.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "flexlex/text.hpp"

namespace flexlex {

std::size_t UnionFind::add() {
    parent_.push_back(parent_.size());
    size_.push_back(1);
    return parent_.size() - 1;
}

std::size_t UnionFind::find(std::size_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
}

std::size_t ClusterBuilder::intern(std::string key) {
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    const std::size_t id = forest_.add();
    keys_.push_back(key);
    index_.emplace(std::move(key), id);
    return id;
}

void ClusterBuilder::add_token(std::string_view form, std::string_view lemma_key) {
    if (text::is_punct_or_digit(form)) return;
    const std::size_t f = intern(text::fold_case(form));
    const std::size_t l = intern(text::fold_case(lemma_key));
    forest_.unite(f, l);
}

ClusterSet ClusterBuilder::finish() && {
    ClusterSet set;
    const std::size_t n = keys_.size();
    std::vector<std::size_t> best(n, n);  // root -> smallest member id
    for (std::size_t id = 0; id < n; ++id) {
        const std::size_t root = forest_.find(id);
        if (best[root] == n || keys_[id] < keys_[best[root]]) best[root] = id;
    }
    set.representative_of_.resize(n);
    for (std::size_t id = 0; id < n; ++id) {
        const std::size_t root = forest_.find(id);
        set.representative_of_[id] = best[root];
        if (root == id) ++set.cluster_count_;
    }
    set.keys_ = std::move(keys_);
    set.index_ = std::move(index_);
    return set;
}

const std::string* ClusterSet::find_representative(std::string_view folded_key) const {
    auto it = index_.find(std::string(folded_key));
    if (it == index_.end()) return nullptr;
    return &keys_[representative_of_[it->second]];
}

std::string ClusterSet::resolve(std::string_view key) const {
    std::string folded = text::fold_case(key);
    if (const std::string* rep = find_representative(folded)) return *rep;
    return folded;
}

bool ClusterSet::contains(std::string_view key) const {
    return index_.contains(text::fold_case(key));
}

std::vector<LemmaCluster> ClusterSet::clusters() const {
    std::map<std::string_view, std::vector<std::string>> grouped;
    for (std::size_t id = 0; id < keys_.size(); ++id)
        grouped[keys_[representative_of_[id]]].push_back(keys_[id]);
    std::vector<LemmaCluster> out;
    out.reserve(grouped.size());
    for (auto& [rep, members] : grouped) {
        std::sort(members.begin(), members.end());
        out.push_back(LemmaCluster{std::string(rep), std::move(members)});
    }
    return out;
}

void ClusterSet::write_tsv(std::ostream& out) const {
    for (const auto& c : clusters()) {
        out << c.representative << '\t';
        for (std::size_t i = 0; i < c.members.size(); ++i) out << (i ? "," : "") << c.members[i];
        out << '\n';
    }
}

ClusterSet build_clusters(const TaggedCorpus& corpus) {
    ClusterBuilder builder;
    for (const auto& sentence : corpus.sentences())
        for (const auto& token : sentence) builder.add(token);
    return std::move(builder).finish();
}

}  // namespace flexlex
