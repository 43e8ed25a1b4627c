#pragma once

#include <cstdint>
#include <limits>

namespace consrate {

/// SplitMix64: 64-bit state, free to seed. Every Monte-Carlo trial owns one,
/// seeded from (master seed, stream index), so results do not depend on how
/// trials are scheduled across threads.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Seed for an independent stream derived from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
    Rng outer(master);
    const std::uint64_t salt = outer();
    Rng inner(salt ^ (stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
    inner();
    return inner();
}

inline Rng make_stream(std::uint64_t master, std::uint64_t stream) noexcept {
    return Rng(derive_seed(master, stream));
}

/// Uniform double on [0, 1) from the top 53 bits; bit-identical across platforms.
inline double uniform01(Rng& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace consrate
