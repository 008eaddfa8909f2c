#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "pod/crypto.hpp"

namespace pod {

/// Mixes a master seed with a list of stream tags (epoch, watchtower id,
/// purpose...) into an independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags);

/// Seeded stream with platform-independent output. Distribution helpers are
/// written out here because the standard distributions are not specified
/// bit-exactly across library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t master, std::initializer_list<std::uint64_t> tags) : engine_(derive_seed(master, tags)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound - 1);
        for (;;) {
            const std::uint64_t v = engine_() & mask;
            if (v < bound) return v;
        }
    }

    Digest digest() {
        Digest d;
        for (std::size_t i = 0; i < Digest::kSize; i += 8) {
            std::uint64_t v = engine_();
            for (int b = 0; b < 8; ++b) d.bytes[i + b] = static_cast<std::uint8_t>(v >> (56 - 8 * b));
        }
        return d;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace pod
