#pragma once

#include <cstdint>

namespace blockspec {

/// Deterministic 64-bit generator (splitmix64). Output is fully defined by
/// the seed, independent of platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). Multiply-shift; bias is < bound/2^64.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

private:
    std::uint64_t state_;
};

/// Derives an independent stream seed from (base seed, stream index) so
/// concurrent trials are order-independent.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    Rng h(base ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL));
    h.next_u64();
    return h.next_u64();
}

}  // namespace blockspec
