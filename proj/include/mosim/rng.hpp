#pragma once

#include <cstdint>
#include <random>

namespace mosim {

// splitmix64 finalizer, used to derive independent substream seeds from a
// master seed plus an arbitrary stream path (point index, trial index, ...).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = mix64(master ^ 0xa0761d6478bd642fULL);
    s = mix64(s ^ mix64(a));
    s = mix64(s ^ mix64(b ^ 0xe7037ed1a0b428dbULL));
    s = mix64(s ^ mix64(c ^ 0x8ebc6af09c88c6e3ULL));
    return s;
}

// Seedable RNG stream. Each stochastic operation owns its stream; streams
// derived from (master, path...) are independent for distinct paths.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    static Rng substream(std::uint64_t master, std::uint64_t a = 0,
                         std::uint64_t b = 0, std::uint64_t c = 0) {
        return Rng(derive_seed(master, a, b, c));
    }

    double uniform() { return unif_(eng_); }                  // U[0,1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * unif_(eng_); }
    double normal() { return norm_(eng_); }                   // N(0,1)
    // uniform integer in [0, n)
    std::uint64_t index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_);
    }
    std::uint64_t bits() { return eng_(); }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    std::normal_distribution<double> norm_{0.0, 1.0};
};

} // namespace mosim
