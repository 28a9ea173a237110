#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace hashlearn {

/// k simulated permutations via 2-universal hashing
///   h_j(t) = ((c1_j + c2_j * t) mod p) mod D
/// with p the smallest prime > D, c1_j uniform in [0, p) and c2_j uniform
/// in [1, p). Stores only the 2k coefficients; fully determined by
/// (seed, k, D). Note h_j is not injective on [0, D), so distinct features
/// can collide on a hashed value; the resulting small perturbation of the
/// resemblance estimate is left as-is (it is what the estimator-level
/// comparison against explicit permutations quantifies).
struct TwoUniversalHashFamily {
    uint64_t prime_p = 0;
    uint64_t universe_size = 0;
    uint64_t seed = 0;
    std::vector<std::pair<uint64_t, uint64_t>> coeffs; // (c1_j, c2_j)

    uint32_t size() const { return static_cast<uint32_t>(coeffs.size()); }
};

TwoUniversalHashFamily build_2u_family(uint32_t k, uint64_t universe_size, uint64_t seed);

/// h_j(t). Throws std::out_of_range for j >= k or t >= D.
uint64_t apply_hash(const TwoUniversalHashFamily& family, size_t j, uint64_t t);

/// k true random permutations of [0, D), stored in full. Only practical for
/// small universes; used as the exact reference the hash families are
/// measured against.
struct ExplicitPermutationFamily {
    uint64_t universe_size = 0;
    uint64_t seed = 0;
    std::vector<std::vector<uint32_t>> permutations;

    uint32_t size() const { return static_cast<uint32_t>(permutations.size()); }
};

ExplicitPermutationFamily build_permutation_family(uint32_t k, uint64_t universe_size, uint64_t seed);

uint64_t apply_hash(const ExplicitPermutationFamily& family, size_t j, uint64_t t);

} // namespace hashlearn
