#pragma once

#include <cstdint>

namespace specgame {

// xoshiro256** with splitmix64 seeding. Self-contained so that streams are
// reproducible across platforms and standard library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    // Independent substream k of a master seed. Trial k of an experiment
    // uses substream(master, k); k = UINT64_MAX is reserved for the
    // harness itself.
    static Rng substream(std::uint64_t master, std::uint64_t k) {
        std::uint64_t x = master;
        std::uint64_t a = splitmix64(x);
        x ^= k * 0x9e3779b97f4a7c15ULL;
        std::uint64_t b = splitmix64(x);
        return Rng(a ^ (b + 0x632be59bd9b4e019ULL));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, n) by rejection sampling; exact for any n >= 1.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t threshold = -n % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    double uniform_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace specgame
