#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

// Platform-independent random streams. std::mt19937_64 output is fixed by the standard, but the
// standard distributions are not, so bounded integers and normals are derived here.
namespace flexlex::rng {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// FNV-1a, 64-bit.
constexpr std::uint64_t hash_bytes(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

constexpr std::uint64_t combine(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

// Seed for the downsampling stream of one cluster.
inline std::uint64_t lemma_seed(std::uint64_t global_seed, std::string_view cluster_key) {
    return combine(global_seed, hash_bytes(cluster_key));
}

// Uniform integer in [0, n), n > 0, by rejection.
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t n) {
    const std::uint64_t limit = (~0ull) - ((~0ull) % n + 1) % n;
    std::uint64_t x;
    do {
        x = eng();
    } while (x > limit);
    return x % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

// Box-Muller; consumes two draws per value.
double standard_normal(Engine& eng);

// `k` distinct indices from [0, n), returned in ascending order (partial Fisher-Yates).
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Engine& eng);

}  // namespace flexlex::rng
