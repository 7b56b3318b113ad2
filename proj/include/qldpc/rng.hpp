// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstring>
#include <vector>

namespace qldpc {

// Counter-based PRNG built on the splitmix64 finalizer. Output j of a stream
// is a pure function of (key, j), so streams can be split per (point, trial)
// and evaluated in any order or thread without changing a single draw.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Fold extra words into a key; mix() between words keeps streams with
    // different derivation paths statistically independent.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t a) {
        return mix(mix(seed) ^ a);
    }
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
        return mix(derive(seed, a) ^ b);
    }
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                std::uint64_t c) {
        return mix(derive(seed, a, b) ^ c);
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    // Uniform in [0, 1) with 53 bits of mantissa.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n) via the multiply-shift reduction. Fine for the
    // simulation's purposes and exactly reproducible across platforms.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Fisher-Yates permutation of [0, n).
    std::vector<std::uint32_t> permutation(std::uint32_t n) {
        std::vector<std::uint32_t> p(n);
        for (std::uint32_t i = 0; i < n; ++i)
            p[i] = i;
        for (std::uint32_t i = n; i > 1; --i) {
            auto j = static_cast<std::uint32_t>(next_below(i));
            std::swap(p[i - 1], p[j]);
        }
        return p;
    }

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Bit pattern of a double, used to key per-point streams by the value of p
// rather than its position in a sweep list.
inline std::uint64_t double_bits(double x) {
    std::uint64_t u;
    static_assert(sizeof(u) == sizeof(x));
    std::memcpy(&u, &x, sizeof(u));
    return u;
}

} // namespace qldpc
