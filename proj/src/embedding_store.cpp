#include "flexlex/embedding_store.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "flexlex/error.hpp"
#include "flexlex/text.hpp"

namespace flexlex {
namespace {

class ByteWriter {
public:
    explicit ByteWriter(std::vector<std::uint8_t>& out) : out_(out) {}

    template <typename T>
    void put_le(T value) {
        for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
    }
    void put_f32(float f) { put_le(std::bit_cast<std::uint32_t>(f)); }
    void put_string16(const std::string& s) {
        put_le(static_cast<std::uint16_t>(s.size()));
        out_.insert(out_.end(), s.begin(), s.end());
    }

private:
    std::vector<std::uint8_t>& out_;
};

class ByteReader {
public:
    explicit ByteReader(std::istream& in) : in_(in) {}

    std::uint64_t offset() const { return offset_; }
    void advance(std::uint64_t n) { offset_ += n; }

    void read(void* dst, std::size_t n, const char* what) {
        in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
        const auto got = static_cast<std::size_t>(in_.gcount());
        if (got != n) throw CorruptionError(offset_ + got, std::string("truncated while reading ") + what);
        offset_ += n;
    }

    template <typename T>
    T get_le(const char* what) {
        std::uint8_t buf[sizeof(T)];
        read(buf, sizeof(T), what);
        T value = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(static_cast<T>(buf[i]) << (8 * i));
        return value;
    }

    std::string get_string16(const char* what) {
        const auto len = get_le<std::uint16_t>(what);
        std::string s(len, '\0');
        if (len) read(s.data(), len, what);
        if (!text::is_valid_utf8(s)) throw DataError(std::string("invalid UTF-8 in ") + what);
        return s;
    }

    VectorSet get_vectors(std::size_t count, std::size_t dimension, const char* what) {
        std::vector<float> data;
        const std::size_t components = count * dimension;
        // Grow in bounded chunks so a corrupt count cannot trigger a huge allocation up front.
        constexpr std::size_t kChunk = 1 << 16;
        std::vector<std::uint8_t> raw;
        std::size_t done = 0;
        while (done < components) {
            const std::size_t n = std::min(kChunk, components - done);
            raw.resize(n * 4);
            const std::uint64_t start = offset_;
            read(raw.data(), raw.size(), what);
            for (std::size_t k = 0; k < n; ++k) {
                const std::uint32_t bits = static_cast<std::uint32_t>(raw[4 * k]) |
                                           static_cast<std::uint32_t>(raw[4 * k + 1]) << 8 |
                                           static_cast<std::uint32_t>(raw[4 * k + 2]) << 16 |
                                           static_cast<std::uint32_t>(raw[4 * k + 3]) << 24;
                const float f = std::bit_cast<float>(bits);
                if (!std::isfinite(f))
                    throw DataError("non-finite component at byte offset " + std::to_string(start + 4 * k));
                data.push_back(f);
            }
            done += n;
        }
        return VectorSet(dimension, std::move(data));
    }

private:
    std::istream& in_;
    std::uint64_t offset_ = 0;
};

void check_vectors(const VectorSet& v, std::size_t dimension, const std::string& key, const char* cls) {
    if (v.empty()) return;
    if (v.dimension() != dimension)
        throw FormatError("record '" + key + "': " + cls + " vectors have dimension " +
                          std::to_string(v.dimension()) + ", store dimension is " + std::to_string(dimension));
    for (float f : v.data())
        if (!std::isfinite(f)) throw FormatError("record '" + key + "': non-finite " + cls + " component");
    if (v.size() > std::numeric_limits<std::uint32_t>::max())
        throw FormatError("record '" + key + "': too many " + cls + " vectors");
}

}  // namespace

VectorSet::VectorSet(std::size_t dimension, std::vector<float> data) : dimension_(dimension), data_(std::move(data)) {
    if (dimension_ == 0 ? !data_.empty() : data_.size() % dimension_ != 0)
        throw FormatError("vector data length is not a multiple of the dimension");
}

void VectorSet::push_back(std::span<const float> v) {
    if (v.size() != dimension_)
        throw FormatError("vector of dimension " + std::to_string(v.size()) + " added to set of dimension " +
                          std::to_string(dimension_));
    data_.insert(data_.end(), v.begin(), v.end());
}

const EmbeddingRecord* EmbeddingStore::find(const std::string& key) const {
    for (const auto& r : records)
        if (r.cluster_key == key) return &r;
    return nullptr;
}

void validate_store(const EmbeddingStore& store) {
    if (store.dimension < 1) throw FormatError("store dimension must be at least 1");
    if (store.layer_label.size() > std::numeric_limits<std::uint16_t>::max())
        throw FormatError("layer label longer than 65535 bytes");
    if (!text::is_valid_utf8(store.layer_label)) throw FormatError("layer label is not valid UTF-8");
    std::unordered_set<std::string_view> seen;
    for (const auto& r : store.records) {
        if (r.cluster_key.size() > std::numeric_limits<std::uint16_t>::max())
            throw FormatError("cluster key longer than 65535 bytes");
        if (!text::is_valid_utf8(r.cluster_key)) throw FormatError("cluster key is not valid UTF-8");
        if (!seen.insert(r.cluster_key).second) throw FormatError("duplicate cluster key '" + r.cluster_key + "'");
        check_vectors(r.noun_vectors, store.dimension, r.cluster_key, "noun");
        check_vectors(r.verb_vectors, store.dimension, r.cluster_key, "verb");
    }
}

std::uint64_t serialized_size(const EmbeddingStore& store) {
    std::uint64_t n = 4 + 4 + 4 + 2 + store.layer_label.size() + 8;
    for (const auto& r : store.records) {
        n += 2 + r.cluster_key.size() + 4 + 4;
        n += 4ull * store.dimension * (r.noun_vectors.size() + r.verb_vectors.size());
    }
    return n;
}

std::vector<std::uint8_t> encode_store(const EmbeddingStore& store) {
    validate_store(store);
    std::vector<std::uint8_t> bytes;
    bytes.reserve(serialized_size(store));
    ByteWriter w(bytes);
    bytes.insert(bytes.end(), std::begin(kStoreMagic), std::end(kStoreMagic));
    w.put_le(kStoreVersion);
    w.put_le(store.dimension);
    w.put_string16(store.layer_label);
    w.put_le(static_cast<std::uint64_t>(store.records.size()));
    for (const auto& r : store.records) {
        w.put_string16(r.cluster_key);
        w.put_le(static_cast<std::uint32_t>(r.noun_vectors.size()));
        w.put_le(static_cast<std::uint32_t>(r.verb_vectors.size()));
        for (float f : r.noun_vectors.data()) w.put_f32(f);
        for (float f : r.verb_vectors.data()) w.put_f32(f);
    }
    return bytes;
}

void write_store(const EmbeddingStore& store, std::ostream& out) {
    const auto bytes = encode_store(store);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing embedding store");
}

void write_store_file(const EmbeddingStore& store, const std::filesystem::path& path) {
    const auto bytes = encode_store(store);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing: " + path.string());
}

EmbeddingStore read_store(std::istream& in) {
    ByteReader r(in);
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, kStoreMagic, 4) != 0)
        throw UnrecognizedFormatError("not a WCF1 embedding store (bad magic)");
    r.advance(4);
    EmbeddingStore store;
    const auto version = r.get_le<std::uint32_t>("version");
    if (version != kStoreVersion)
        throw UnrecognizedFormatError("unsupported WCF1 version " + std::to_string(version));
    store.dimension = r.get_le<std::uint32_t>("dimension");
    if (store.dimension < 1) throw CorruptionError(r.offset() - 4, "dimension must be at least 1");
    store.layer_label = r.get_string16("layer label");
    const auto count = r.get_le<std::uint64_t>("record count");
    std::unordered_set<std::string> seen;
    for (std::uint64_t i = 0; i < count; ++i) {
        EmbeddingRecord rec;
        rec.cluster_key = r.get_string16("cluster key");
        if (!seen.insert(rec.cluster_key).second) throw DataError("duplicate cluster key '" + rec.cluster_key + "'");
        const auto nouns = r.get_le<std::uint32_t>("noun count");
        const auto verbs = r.get_le<std::uint32_t>("verb count");
        rec.noun_vectors = r.get_vectors(nouns, store.dimension, "noun vectors");
        rec.verb_vectors = r.get_vectors(verbs, store.dimension, "verb vectors");
        store.records.push_back(std::move(rec));
    }
    return store;
}

EmbeddingStore decode_store(std::span<const std::uint8_t> bytes) {
    std::string buf(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    std::istringstream in(std::move(buf));
    return read_store(in);
}

EmbeddingStore read_store_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open embedding store: " + path.string());
    return read_store(in);
}

EmbeddingStore filter_eligible(const EmbeddingStore& store, std::size_t min_each) {
    EmbeddingStore out;
    out.dimension = store.dimension;
    out.layer_label = store.layer_label;
    for (const auto& r : store.records)
        if (r.noun_vectors.size() >= min_each && r.verb_vectors.size() >= min_each) out.records.push_back(r);
    return out;
}

}  // namespace flexlex
