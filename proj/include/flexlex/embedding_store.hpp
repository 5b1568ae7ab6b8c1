#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace flexlex {

// Row-major block of equal-length float vectors.
class VectorSet {
public:
    VectorSet() = default;
    explicit VectorSet(std::size_t dimension) : dimension_(dimension) {}
    VectorSet(std::size_t dimension, std::vector<float> data);

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return dimension_ == 0 ? 0 : data_.size() / dimension_; }
    bool empty() const { return data_.empty(); }

    std::span<const float> operator[](std::size_t i) const {
        return {data_.data() + i * dimension_, dimension_};
    }
    void push_back(std::span<const float> v);

    const std::vector<float>& data() const { return data_; }

    // Empty sets compare equal whatever dimension they were created with.
    bool operator==(const VectorSet& other) const {
        if (empty() || other.empty()) return empty() && other.empty();
        return dimension_ == other.dimension_ && data_ == other.data_;
    }

private:
    std::size_t dimension_ = 0;
    std::vector<float> data_;
};

struct EmbeddingRecord {
    std::string cluster_key;
    VectorSet noun_vectors;
    VectorSet verb_vectors;

    bool operator==(const EmbeddingRecord&) const = default;
};

struct EmbeddingStore {
    std::uint32_t dimension = 1;
    std::string layer_label;
    std::vector<EmbeddingRecord> records;

    const EmbeddingRecord* find(const std::string& key) const;

    bool operator==(const EmbeddingStore&) const = default;
};

inline constexpr char kStoreMagic[4] = {'W', 'C', 'F', '1'};
inline constexpr std::uint32_t kStoreVersion = 1;

// Checks the store invariants; throws FormatError on violation.
void validate_store(const EmbeddingStore& store);

// Size in bytes of the serialized store.
std::uint64_t serialized_size(const EmbeddingStore& store);

// The store is validated and fully encoded before the first byte reaches `out`.
void write_store(const EmbeddingStore& store, std::ostream& out);
std::vector<std::uint8_t> encode_store(const EmbeddingStore& store);
void write_store_file(const EmbeddingStore& store, const std::filesystem::path& path);

EmbeddingStore read_store(std::istream& in);
EmbeddingStore decode_store(std::span<const std::uint8_t> bytes);
EmbeddingStore read_store_file(const std::filesystem::path& path);

// Keeps records with at least `min_each` vectors in both classes.
EmbeddingStore filter_eligible(const EmbeddingStore& store, std::size_t min_each = 30);

}  // namespace flexlex
