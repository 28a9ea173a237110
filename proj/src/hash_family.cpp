#include "hashlearn/hash_family.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

#include "hashlearn/primes.hpp"
#include "hashlearn/rng.hpp"

namespace hashlearn {

TwoUniversalHashFamily build_2u_family(uint32_t k, uint64_t universe_size, uint64_t seed) {
    if (k < 1) throw std::invalid_argument("build_2u_family: k must be >= 1");
    if (universe_size < 1) throw std::invalid_argument("build_2u_family: universe must be >= 1");

    TwoUniversalHashFamily family;
    family.universe_size = universe_size;
    family.prime_p = next_prime_above(universe_size);
    family.seed = seed;
    family.coeffs.reserve(k);

    // Coefficient j depends only on (seed, j): growing k extends the family
    // without disturbing earlier hash functions.
    const SplitRng rng(seed);
    const uint64_t p = family.prime_p;
    for (uint32_t j = 0; j < k; ++j) {
        const uint64_t c1 = rng.below_at(2ULL * j, p);
        const uint64_t c2 = 1 + rng.below_at(2ULL * j + 1, p - 1);
        family.coeffs.emplace_back(c1, c2);
    }
    return family;
}

uint64_t apply_hash(const TwoUniversalHashFamily& family, size_t j, uint64_t t) {
    if (j >= family.coeffs.size()) throw std::out_of_range("apply_hash: hash index out of range");
    if (t >= family.universe_size) throw std::out_of_range("apply_hash: feature id outside universe");
    const auto [c1, c2] = family.coeffs[j];
    // c2 and t are both < p, so the product needs up to 126 bits.
    const unsigned __int128 v = static_cast<unsigned __int128>(c2) * t + c1;
    return static_cast<uint64_t>(v % family.prime_p) % family.universe_size;
}

ExplicitPermutationFamily build_permutation_family(uint32_t k, uint64_t universe_size, uint64_t seed) {
    if (k < 1) throw std::invalid_argument("build_permutation_family: k must be >= 1");
    if (universe_size < 1 || universe_size > std::numeric_limits<uint32_t>::max()) {
        throw std::invalid_argument("build_permutation_family: universe must fit in 32 bits");
    }

    ExplicitPermutationFamily family;
    family.universe_size = universe_size;
    family.seed = seed;
    family.permutations.reserve(k);
    const SplitRng root(seed);
    for (uint32_t j = 0; j < k; ++j) {
        std::vector<uint32_t> perm(universe_size);
        std::iota(perm.begin(), perm.end(), 0u);
        SeqRng rng(root.split(j));
        for (uint64_t i = universe_size - 1; i > 0; --i) {
            const uint64_t swap_with = rng.next_below(i + 1);
            std::swap(perm[i], perm[swap_with]);
        }
        family.permutations.push_back(std::move(perm));
    }
    return family;
}

uint64_t apply_hash(const ExplicitPermutationFamily& family, size_t j, uint64_t t) {
    if (j >= family.permutations.size()) throw std::out_of_range("apply_hash: permutation index out of range");
    if (t >= family.universe_size) throw std::out_of_range("apply_hash: feature id outside universe");
    return family.permutations[j][t];
}

} // namespace hashlearn
