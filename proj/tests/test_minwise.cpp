#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hashlearn/hash_family.hpp"
#include "hashlearn/minwise.hpp"
#include "hashlearn/rng.hpp"
#include "hashlearn/sparse_set.hpp"
#include "support/oracles.hpp"

using namespace hashlearn;

TEST_CASE("minwise sketch basics") {
    const uint64_t D = 256;
    const auto fam = build_2u_family(16, D, 3);
    const auto single = SparseBinarySet::from_indices({37}, D);
    const auto sk = minwise_sketch(single, fam);
    REQUIRE(sk.k() == 16);
    for (size_t j = 0; j < 16; ++j) CHECK(sk.values[j] == apply_hash(fam, j, 37));

    const auto s = SparseBinarySet::from_indices({5, 37, 200}, D);
    const auto sk2 = minwise_sketch(s, fam);
    for (size_t j = 0; j < 16; ++j) {
        const uint64_t expect = std::min({apply_hash(fam, j, 5), apply_hash(fam, j, 37),
                                          apply_hash(fam, j, 200)});
        CHECK(sk2.values[j] == expect);
    }

    const SparseBinarySet empty{{}, D};
    CHECK_THROWS_AS(minwise_sketch(empty, fam), std::invalid_argument);
}

TEST_CASE("full estimator counts matching positions") {
    MinwiseSketch a, b;
    a.values = {1, 2, 3, 9};
    b.values = {1, 5, 3, 8};
    CHECK(estimate_resemblance_full(a, b) == 0.5);
    CHECK(estimate_resemblance_full(a, a) == 1.0);
    MinwiseSketch c;
    c.values = {1, 2};
    CHECK_THROWS_AS(estimate_resemblance_full(a, c), std::invalid_argument);
}

TEST_CASE("variance_full") {
    CHECK(variance_full(0.5, 100) == 0.0025);
    CHECK(variance_full(1.0, 7) == 0.0);
    CHECK(variance_full(0.0, 7) == 0.0);
}

TEST_CASE("truncate_to_b_bits keeps the low bits") {
    MinwiseSketch m;
    m.values = {12013, 25964, 20191};
    const auto b2 = truncate_to_b_bits(m, 2);
    CHECK(b2.bits == 2);
    CHECK(b2.values == std::vector<uint16_t>{1, 0, 3});
    const auto b16 = truncate_to_b_bits(m, 16);
    CHECK(b16.values == std::vector<uint16_t>{12013, 25964, 20191});
    MinwiseSketch small;
    small.values = {255};
    CHECK(truncate_to_b_bits(small, 4).values == std::vector<uint16_t>{15});
    CHECK_THROWS_AS(truncate_to_b_bits(m, 0), std::invalid_argument);
    CHECK_THROWS_AS(truncate_to_b_bits(m, 17), std::invalid_argument);
}

TEST_CASE("b-bit collision constants match frozen high-precision values") {
    // r1 = 1/4, r2 = 1/8, b = 2; reference values computed offline with
    // 50-digit arithmetic from the defining formulas.
    const auto p = bbit_params(256, 128, 1024, 2);
    CHECK(p.r1 == 0.25);
    CHECK(p.r2 == 0.125);
    CHECK(p.A1b == doctest::Approx(testsupport::kRefA1b_r25_b2).epsilon(2e-15));
    CHECK(p.A2b == doctest::Approx(testsupport::kRefA2b_r125_b2).epsilon(2e-15));
    CHECK(p.C1b == doctest::Approx(testsupport::kRefC1b_r25_r125_b2).epsilon(2e-15));
    CHECK(p.C2b == doctest::Approx(testsupport::kRefC2b_r25_r125_b2).epsilon(2e-15));
}

TEST_CASE("equal cardinalities collapse the constants") {
    const auto p = bbit_params(100, 100, 4096, 3);
    CHECK(p.A1b == p.A2b);
    CHECK(p.C1b == p.A1b);
    CHECK(p.C2b == p.A1b);
}

TEST_CASE("constants tend to 2^-b as sparsity vanishes") {
    for (uint8_t b : {uint8_t{1}, uint8_t{2}, uint8_t{4}}) {
        const auto p = bbit_params(1, 1, 1000000, b); // r = 1e-6
        const double limit = std::ldexp(1.0, -b);
        CHECK(std::fabs(p.A1b - limit) < 1e-5);
        CHECK(std::fabs(p.A2b - limit) < 1e-5);
        CHECK(std::fabs(p.C1b - limit) < 1e-5);
        CHECK(std::fabs(p.C2b - limit) < 1e-5);
    }
}

TEST_CASE("bbit_params rejects empty sets") {
    CHECK_THROWS_AS(bbit_params(0, 5, 100, 2), std::invalid_argument);
    CHECK_THROWS_AS(bbit_params(5, 0, 100, 2), std::invalid_argument);
}

TEST_CASE("estimate_Pb counts full-width agreements") {
    BBitSketch a, b;
    a.bits = b.bits = 2;
    a.values = {1, 0, 3};
    b.values = {1, 2, 3};
    CHECK(estimate_Pb(a, b) == doctest::Approx(2.0 / 3.0));
    CHECK(estimate_Pb(a, a) == 1.0);
    BBitSketch c;
    c.bits = 3;
    c.values = {1, 0, 3};
    CHECK_THROWS_AS(estimate_Pb(a, c), std::invalid_argument);
}

TEST_CASE("estimator inversion round-trips through the collision probability") {
    const auto p = bbit_params(328, 328, 1 << 16, 2);
    for (double R : {0.1, 0.5, 0.9}) {
        const double pb = collision_probability_bbit(p, R);
        const auto est = estimate_resemblance_bbit(pb, p);
        CHECK_FALSE(est.out_of_range);
        CHECK(est.value == doctest::Approx(R).epsilon(1e-12));
    }
    // A collision fraction of zero inverts below R = 0 and is flagged.
    const auto low = estimate_resemblance_bbit(0.0, p);
    CHECK(low.out_of_range);
    CHECK(low.value < 0.0);
}

TEST_CASE("truncation can only create matches") {
    const uint64_t D = 1 << 12;
    SeqRng rng(uint64_t{99});
    const auto fam = build_2u_family(64, D, 1234);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<uint64_t> i1, i2;
        for (uint64_t v = 0; v < D; ++v) {
            if (rng.next_unit() < 0.02) i1.push_back(v);
            if (rng.next_unit() < 0.02) i2.push_back(v);
        }
        if (i1.empty() || i2.empty()) continue;
        const auto m1 = minwise_sketch(SparseBinarySet::from_indices(i1, D), fam);
        const auto m2 = minwise_sketch(SparseBinarySet::from_indices(i2, D), fam);
        const double full = estimate_resemblance_full(m1, m2);
        for (uint8_t b : {uint8_t{1}, uint8_t{2}, uint8_t{8}, uint8_t{16}}) {
            CHECK(estimate_Pb(truncate_to_b_bits(m1, b), truncate_to_b_bits(m2, b)) >= full);
        }
    }
}

TEST_CASE("variance_bbit closed form") {
    // Near-limit geometry, b = 1, R = 0.5: P_b = 3/4 and the variance is
    // 0.75(0.25)/(k (1/2)^2) = 0.75/k.
    const auto p = bbit_params(1, 1, 1000000000, 1);
    CHECK(variance_bbit(0.5, p, 1) == doctest::Approx(0.75).epsilon(1e-5));
    CHECK(variance_bbit(0.5, p, 100) == doctest::Approx(0.0075).epsilon(1e-5));

    // P_b = 1 (identical sets, R = 1 with C1b + 1 - C2b = 1 only in the
    // limit); directly: any params with R chosen so collision probability
    // is 1 give zero Bernoulli variance. Use the exact inversion instead:
    const auto q = bbit_params(328, 328, 1 << 16, 2);
    const double R_at_pb1 = (1.0 - q.C1b) / (1.0 - q.C2b);
    CHECK(std::fabs(variance_bbit(R_at_pb1, q, 50)) < 1e-12);
}

TEST_CASE("wide truncation converges to the full estimator's variance") {
    // b = 16 at r = 1e-6: extra-collision correction is ~2^-16, so the
    // b-bit variance is within 0.1% of R(1-R)/k at R = 0.5.
    const auto p = bbit_params(10, 10, 10000000, 16);
    const double vb = variance_bbit(0.5, p, 100);
    const double vf = variance_full(0.5, 100);
    CHECK(std::fabs(vb - vf) / vf < 1e-3);
}
