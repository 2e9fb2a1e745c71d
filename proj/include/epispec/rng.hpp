#pragma once

#include <cstdint>
#include <vector>

namespace epispec {

// splitmix64 finalizer (Steele/Lea/Flood, public domain). Used to expand
// seeds into generator state and to mix several seed components into one
// stream id, so derived seeds are decorrelated even for adjacent inputs.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// xoshiro256** (Blackman & Vigna, public domain). Chosen over std::mt19937_64
// because its output sequence is pinned by this header alone: benchmark
// graphs must be bit-reproducible across compilers and standard libraries,
// and std::uniform_int_distribution is not portable.
class Xoshiro256 {
public:
    explicit Xoshiro256(uint64_t seed) {
        // A zero state would be a fixed point; splitmix64 expansion cannot
        // produce all-zero state from any seed.
        for (auto& word : s_) word = splitmix64(seed);
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Unbiased uniform integer in [0, bound). Rejection sampling keeps the
    // distribution exact; the loop terminates with probability 1.
    uint64_t next_below(uint64_t bound) {
        const uint64_t threshold = (-bound) % bound;
        for (;;) {
            const uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // In-place Fisher-Yates shuffle driven by this stream.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            const size_t j = static_cast<size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

} // namespace epispec
