#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace txtrace {

// Deterministic RNG. mt19937_64 output is fully specified by the standard;
// the derived samplers below avoid std::uniform_*_distribution, whose
// algorithms are implementation-defined, so streams are identical across
// compilers and platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // Uniform in [0, n). Modulo reduction; bias is irrelevant here.
    uint64_t below(uint64_t n) { return n ? gen_() % n : 0; }

    // Uniform in [lo, hi] inclusive.
    int64_t range(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    // Uniform double in [0, 1).
    double uniform() { return (gen_() >> 11) * (1.0 / 9007199254740992.0); }

    bool chance(double p) { return uniform() < p; }

    // Derive an independent, reproducible child stream.
    Rng child(uint64_t salt) {
        return Rng(gen_() ^ (salt * 0x9e3779b97f4a7c15ull));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace txtrace
