#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace vdec {

// Deterministic RNG wrapper. mt19937_64 output is fully specified by the
// standard, but the std distributions are not, so uniform() rolls its own
// rejection loop to keep runs byte-identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next() { return eng_(); }

    // Uniform integer in [0, bound). bound must be positive.
    int uniform(int bound) {
        std::uint64_t span = static_cast<std::uint64_t>(bound);
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return static_cast<int>(x % span);
    }

    // Bernoulli with probability p (53-bit resolution).
    bool chance(double p) {
        double u = static_cast<double>(eng_() >> 11) * (1.0 / 9007199254740992.0);
        return u < p;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i)
            std::swap(v[static_cast<std::size_t>(i)],
                      v[static_cast<std::size_t>(uniform(i + 1))]);
    }

    // Child stream with an independent-looking seed; the derivation is a
    // fixed splitmix64 step so traces can record it.
    static std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) {
        std::uint64_t z = parent + 0x9e3779b97f4a7c15ULL * (tag + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    Rng derive(std::uint64_t tag) const { return Rng(derive_seed(seed_, tag)); }

private:
    std::mt19937_64 eng_;
    std::uint64_t seed_;
};

}  // namespace vdec
