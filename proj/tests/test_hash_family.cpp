#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hashlearn/hash_family.hpp"
#include "hashlearn/primes.hpp"
#include "support/oracles.hpp"

using namespace hashlearn;

TEST_CASE("2-universal family construction") {
    const auto fam = build_2u_family(100, 16, 9);
    CHECK(fam.prime_p == 17);
    CHECK(fam.universe_size == 16);
    CHECK(fam.size() == 100);
    for (const auto& [c1, c2] : fam.coeffs) {
        CHECK(c1 < fam.prime_p);
        CHECK(c2 >= 1);
        CHECK(c2 < fam.prime_p);
    }
    // Deterministic rebuild.
    const auto again = build_2u_family(100, 16, 9);
    CHECK(fam.coeffs == again.coeffs);
    // A different seed gives different coefficients somewhere.
    const auto other = build_2u_family(100, 16, 10);
    CHECK(fam.coeffs != other.coeffs);
    // The modulus is the smallest prime above D.
    const auto big = build_2u_family(1, (uint64_t{1} << 16), 0);
    CHECK(big.prime_p == 65537);
    CHECK(big.prime_p == next_prime_above(uint64_t{1} << 16));
}

TEST_CASE("coefficient streams are a prefix property of the seed") {
    // Growing k must extend the family, not reshuffle it; the experiment
    // grid relies on this to reuse one long sketch for every smaller k.
    const auto small = build_2u_family(10, 1 << 12, 77);
    const auto large = build_2u_family(50, 1 << 12, 77);
    for (size_t j = 0; j < 10; ++j) CHECK(small.coeffs[j] == large.coeffs[j]);
}

TEST_CASE("apply_hash computes ((c1 + c2 t) mod p) mod D") {
    TwoUniversalHashFamily fam;
    fam.prime_p = 31;
    fam.universe_size = 16;
    fam.coeffs = {{3, 5}, {0, 1}};
    CHECK(apply_hash(fam, 0, 7) == 7);  // (3 + 35) mod 31 = 7
    CHECK(apply_hash(fam, 1, 11) == 11); // identity coefficients below D
    CHECK(apply_hash(fam, 0, 15) == (3 + 5 * 15) % 31 % 16);
    CHECK_THROWS_AS(apply_hash(fam, 2, 0), std::out_of_range);
    CHECK_THROWS_AS(apply_hash(fam, 0, 16), std::out_of_range);
}

TEST_CASE("hash values over many families follow the folded distribution") {
    // Fix t, sweep j over a large family, bucket the outputs. Since c1 is
    // uniform over [0, p), (c1 + c2 t) mod p is uniform over [0, p), and the
    // final mod-D fold gives value v mass fold_v / p where fold_v counts the
    // residues of [0, p) landing on v (2 for v < p - D, else 1). Chi-square
    // against that distribution, D - 1 = 255 degrees of freedom.
    const uint64_t D = 256;
    const auto fam = build_2u_family(1 << 16, D, 4242);
    std::vector<uint64_t> counts(D, 0);
    for (size_t j = 0; j < fam.size(); ++j) counts[apply_hash(fam, j, 123)] += 1;

    std::vector<uint64_t> fold(D, 0);
    for (uint64_t u = 0; u < fam.prime_p; ++u) fold[u % D] += 1;
    const double n = static_cast<double>(fam.size());
    double chi2 = 0;
    for (uint64_t v = 0; v < D; ++v) {
        const double expect = n * static_cast<double>(fold[v]) / static_cast<double>(fam.prime_p);
        const double diff = static_cast<double>(counts[v]) - expect;
        chi2 += diff * diff / expect;
    }
    CHECK(chi2 < testsupport::kChi2Crit99Df255);
}

TEST_CASE("one family member sweeps close to uniform over the universe") {
    // t -> (c1 + c2 t) mod p is injective on [0, D) subset [0, p), so after
    // the mod-D fold every output value occurs once or twice.
    const uint64_t D = 1 << 10;
    const auto fam = build_2u_family(4, D, 5);
    for (size_t j = 0; j < fam.size(); ++j) {
        std::vector<uint64_t> counts(D, 0);
        for (uint64_t t = 0; t < D; ++t) counts[apply_hash(fam, j, t)] += 1;
        CHECK(*std::max_element(counts.begin(), counts.end()) <= 2);
    }
}

TEST_CASE("explicit permutation family rows are bijections") {
    const uint64_t D = 512;
    const auto fam = build_permutation_family(20, D, 31);
    CHECK(fam.size() == 20);
    std::vector<uint32_t> sorted(D);
    std::iota(sorted.begin(), sorted.end(), 0u);
    for (const auto& perm : fam.permutations) {
        auto copy = perm;
        std::sort(copy.begin(), copy.end());
        CHECK(copy == sorted);
    }
    // Deterministic, and rows differ from each other.
    const auto again = build_permutation_family(20, D, 31);
    CHECK(fam.permutations == again.permutations);
    CHECK(fam.permutations[0] != fam.permutations[1]);
    CHECK(apply_hash(fam, 3, 100) == fam.permutations[3][100]);
    CHECK_THROWS_AS(apply_hash(fam, 20, 0), std::out_of_range);
    CHECK_THROWS_AS(apply_hash(fam, 0, D), std::out_of_range);
}
