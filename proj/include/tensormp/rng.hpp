#pragma once

#include <cstdint>

namespace tensormp {

// SplitMix64 output function; bijective on 64-bit words.
inline std::uint64_t splitmix_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ull;

/// Counter-based stream: word(c) = mix(key + c * gamma) reproduces the
/// SplitMix64 sequence seeded at `key`, with random access by counter.
class CounterStream {
  public:
    explicit CounterStream(std::uint64_t key) : key_(key) {}

    /// Fold stream-id components into a key, one at a time.
    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t replica,
                                    std::uint64_t alpha, std::uint64_t slot) {
        std::uint64_t h = splitmix_mix(seed + kGoldenGamma);
        h = splitmix_mix(h + kGoldenGamma + replica);
        h = splitmix_mix(h + kGoldenGamma + alpha);
        h = splitmix_mix(h + kGoldenGamma + slot);
        return h;
    }

    std::uint64_t word(std::uint64_t counter) const {
        return splitmix_mix(key_ + counter * kGoldenGamma);
    }

    /// Uniform on (0, 1]; never returns 0, so logs are safe.
    double uniform(std::uint64_t counter) const {
        return static_cast<double>((word(counter) >> 11) + 1) * 0x1.0p-53;
    }

  private:
    std::uint64_t key_;
};

}  // namespace tensormp
