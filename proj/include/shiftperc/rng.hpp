#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace shiftperc {

// Fixed published default master seed.
inline constexpr std::uint64_t default_seed = 20240229ULL;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based splitting: the child seed depends only on (master, index),
// never on how many draws other streams made.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

inline constexpr std::uint64_t to_u53(std::uint64_t bits) { return bits >> 11; }
inline constexpr double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform attached to a finite subset of naturals (one per subset, as in a
// hierarchical exchangeable array). Deterministic in (seed, subset).
inline std::uint64_t subset_bits(std::uint64_t seed, std::span<const std::uint32_t> subset) {
    std::uint64_t h = mix64(seed ^ (0xd6e8feb86659fd93ULL * (subset.size() + 1)));
    for (auto e : subset) h = mix64(h ^ (static_cast<std::uint64_t>(e) + 1) * 0x9e3779b97f4a7c15ULL);
    return h;
}

inline double subset_uniform(std::uint64_t seed, std::span<const std::uint32_t> subset) {
    return to_unit(subset_bits(seed, subset));
}

// Stream generator over a counter; satisfies UniformRandomBitGenerator.
class counter_rng {
public:
    using result_type = std::uint64_t;

    explicit counter_rng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(derive_seed(seed, stream)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix64(key_ ^ mix64(counter_++)); }

    double uniform() { return to_unit((*this)()); }

    // Uniform in [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = max() - max() % bound;
        std::uint64_t x;
        do x = (*this)(); while (x >= limit);
        return x % bound;
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace shiftperc
