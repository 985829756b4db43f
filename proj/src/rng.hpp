#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

// Small deterministic RNG used for seeding, column permutations and the
// roulette draws. std::shuffle / std::uniform_int_distribution are not
// bit-reproducible across standard libraries, so the draws are spelled out.
namespace gsa {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1) with 53 bits
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // uniform in [0, bound) by rejection, bias-free
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

private:
    std::uint64_t state_;
};

// Derive an independent stream for (seed, index) pairs.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 s(seed ^ (0x7f4a7c15ULL + index * 0x9e3779b97f4a7c15ULL));
    return s.next();
}

// Fisher-Yates permutation of 0..n-1, reproducible for a given seed.
inline std::vector<int> seeded_permutation(std::uint64_t seed, int n) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    SplitMix64 rng(seed);
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    return perm;
}

} // namespace gsa
