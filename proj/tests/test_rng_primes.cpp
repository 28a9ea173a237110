#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "hashlearn/primes.hpp"
#include "hashlearn/rng.hpp"

using namespace hashlearn;

namespace {

// Reference splitmix64 exactly as published: advance by the golden gamma,
// then finalize. SplitRng::at must reproduce this stream.
struct RefSplitmix {
    uint64_t state;
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

std::vector<bool> sieve_upto(uint64_t n) {
    std::vector<bool> is(n + 1, true);
    is[0] = false;
    if (n >= 1) is[1] = false;
    for (uint64_t p = 2; p * p <= n; ++p)
        if (is[p])
            for (uint64_t q = p * p; q <= n; q += p) is[q] = false;
    return is;
}

} // namespace

TEST_CASE("SplitRng reproduces the reference splitmix64 stream") {
    for (uint64_t seed : {uint64_t{0}, uint64_t{1}, uint64_t{1234567},
                          uint64_t{0xdeadbeefcafef00d}}) {
        RefSplitmix ref{seed};
        const SplitRng rng(seed);
        for (uint64_t c = 1; c <= 20; ++c) CHECK(rng.at(c) == ref.next());
    }
}

TEST_CASE("SeqRng walks the counter sequentially") {
    SeqRng seq(uint64_t{42});
    const SplitRng rng(uint64_t{42});
    CHECK(seq.next() == rng.at(0));
    CHECK(seq.next() == rng.at(1));
    CHECK(seq.next_below(1000) == rng.at(2) % 1000);
    CHECK(seq.next_unit() == rng.unit_at(3));
}

TEST_CASE("unit_at stays in [0, 1)") {
    const SplitRng rng(uint64_t{7});
    for (uint64_t c = 0; c < 10000; ++c) {
        const double u = rng.unit_at(c);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("split derives distinct streams") {
    const SplitRng root(uint64_t{5});
    std::set<uint64_t> keys{root.key()};
    for (uint64_t tag = 0; tag < 64; ++tag) keys.insert(root.split(tag).key());
    CHECK(keys.size() == 65); // parent and all children distinct
    // And a child stream differs from the parent stream.
    const SplitRng child = root.split(0);
    int same = 0;
    for (uint64_t c = 0; c < 64; ++c) same += (child.at(c) == root.at(c));
    CHECK(same == 0);
}

TEST_CASE("mix64 is injective on a contiguous block") {
    std::set<uint64_t> seen;
    for (uint64_t z = 0; z < 20000; ++z) seen.insert(mix64(z));
    CHECK(seen.size() == 20000);
}

TEST_CASE("is_prime agrees with a sieve below 10000") {
    const auto is = sieve_upto(10000);
    for (uint64_t n = 0; n <= 10000; ++n) CHECK(is_prime(n) == is[n]);
}

TEST_CASE("is_prime rejects Carmichael and strong pseudoprimes") {
    // Carmichael numbers fool the Fermat test to every coprime base.
    for (uint64_t n : {uint64_t{561}, uint64_t{1105}, uint64_t{1729},
                       uint64_t{41041}, uint64_t{825265}})
        CHECK_FALSE(is_prime(n));
    // Strong pseudoprime to bases 2..23 simultaneously; composite.
    CHECK_FALSE(is_prime(3825123056546413051ULL));
    // And a few outright composites near 2^64.
    CHECK_FALSE(is_prime(UINT64_MAX));            // 3 * 5 * 17 * 257 * ...
    CHECK_FALSE(is_prime(18446744073709551557ULL + 2));
}

TEST_CASE("is_prime accepts large known primes") {
    CHECK(is_prime(2305843009213693951ULL));  // 2^61 - 1
    CHECK(is_prime(18446744073709551557ULL)); // largest 64-bit prime
    CHECK(is_prime(4294967291ULL));           // largest 32-bit prime
    CHECK(is_prime(65537));
}

TEST_CASE("next_prime_above") {
    CHECK(next_prime_above(0) == 2);
    CHECK(next_prime_above(1) == 2);
    CHECK(next_prime_above(2) == 3);
    CHECK(next_prime_above(6) == 7);
    CHECK(next_prime_above(7) == 11);
    CHECK(next_prime_above(16) == 17);
    CHECK(next_prime_above(65536) == 65537);
    // Strictly greater than the argument, prime, and no prime in between.
    for (uint64_t n : {uint64_t{100}, uint64_t{1u << 12}, uint64_t{1u << 20}}) {
        const uint64_t p = next_prime_above(n);
        CHECK(p > n);
        CHECK(is_prime(p));
        for (uint64_t q = n + 1; q < p; ++q) CHECK_FALSE(is_prime(q));
    }
}
