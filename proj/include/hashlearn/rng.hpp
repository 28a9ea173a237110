#pragma once

#include <cstdint>

namespace hashlearn {

// Deterministic randomness for the whole library: splitmix64 run in counter
// mode. Every draw is a pure function of (key, counter), so values can be
// regenerated on the fly (e.g. entries of a projection matrix that is never
// stored) and independent child streams can be derived for parallel work.

inline constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL; // 2^64 / phi

/// splitmix64 finalizer (Steele, Lea, Flood 2014). Bijective on uint64.
inline constexpr uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based stream of 64-bit draws. Stateless: at(c) depends only on
/// the key and c. split(tag) derives an independent child stream.
class SplitRng {
public:
    explicit constexpr SplitRng(uint64_t key) : key_(key) {}

    constexpr uint64_t key() const { return key_; }

    constexpr uint64_t at(uint64_t counter) const {
        return mix64(key_ + kGolden * counter);
    }

    constexpr SplitRng split(uint64_t tag) const {
        return SplitRng(mix64((key_ ^ 0xbf58476d1ce4e5b9ULL) + kGolden * tag));
    }

    /// Uniform double in [0, 1), 53 random bits.
    constexpr double unit_at(uint64_t counter) const {
        return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
    }

    /// Uniform in [0, n) by modular reduction of a 64-bit draw.
    /// Bias is < 2^-40 for n <= 2^20 and is accepted throughout.
    constexpr uint64_t below_at(uint64_t counter, uint64_t n) const {
        return at(counter) % n;
    }

private:
    uint64_t key_;
};

/// Sequential convenience wrapper for call sites that draw a variable
/// number of values (rejection loops, shuffles).
class SeqRng {
public:
    explicit constexpr SeqRng(SplitRng rng) : rng_(rng) {}
    explicit constexpr SeqRng(uint64_t key) : rng_(SplitRng(key)) {}

    constexpr uint64_t next() { return rng_.at(counter_++); }
    constexpr double next_unit() { return rng_.unit_at(counter_++); }
    constexpr uint64_t next_below(uint64_t n) { return rng_.below_at(counter_++, n); }

private:
    SplitRng rng_;
    uint64_t counter_ = 0;
};

} // namespace hashlearn
