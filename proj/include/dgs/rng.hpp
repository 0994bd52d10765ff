#pragma once

#include <cstdint>
#include <random>

namespace dgs {

// SplitMix64 finalizer. Used both as a seed scrambler and to derive
// independent per-trial streams from a root seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for trial number `index` under root seed `root`. Trials are
// reproducible individually: the stream for trial k never depends on how
// many trials ran before it, so parallel and serial sweeps agree.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    return splitmix64(root ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

// Deterministic generator with a portable bounded-draw. mt19937_64 output
// is pinned by the standard; the rejection sampling below avoids
// std::uniform_int_distribution, whose mapping is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform draw from {0, 1, ..., bound-1}, bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t r = gen_();
        while (r >= limit) r = gen_();
        return r % bound;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 gen_;
};

} // namespace dgs
