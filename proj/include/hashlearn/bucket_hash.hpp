#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hashlearn/sparse_vector.hpp"

namespace hashlearn {

/// Signed bucket hashing: every coordinate i is assigned to one of k
/// buckets, optionally pre-multiplied by a random sign r_i. Bucket
/// assignment and signs are keyed-RNG draws regenerated per coordinate,
/// never stored.
struct BucketHashSpec {
    uint32_t k = 0;
    uint64_t bucket_seed = 0;
    uint64_t sign_seed = 0;
    double s = 1.0; // fourth moment of the sign distribution; 1 is the sweet spot
};

/// h(i), uniform over [0, k).
uint32_t bucket_of(const BucketHashSpec& spec, uint64_t i);

/// r_i, the pre-multiplier.
double sign_of(const BucketHashSpec& spec, uint64_t i);

/// Plain Count-Min style bucketing: w_j = sum of u_i with h(i) = j, no signs.
std::vector<double> cm_bucket(const SparseRealVector& u, const BucketHashSpec& spec);

/// sum_j w1_j w2_j. Biased upward for non-negative data: colliding
/// coordinates contribute cross terms that never cancel.
double cm_estimate_biased(std::span<const double> w1, std::span<const double> w2);

/// Signed bucketing: g_j = sum of u_i r_i with h(i) = j.
std::vector<double> vw_hash(const SparseRealVector& u, const BucketHashSpec& spec);

/// sum_j g1_j g2_j, the bias-corrected inner-product estimate. Note there
/// is no 1/k factor here, unlike the random-projection estimator; the two
/// are printed asymmetrically and implemented exactly as printed.
double vw_estimate_inner(std::span<const double> g1, std::span<const double> g2);

/// (s-1) sum u1^2 u2^2
///   + (1/k) [ sum u1^2 sum u2^2 + (sum u1 u2)^2 - 2 sum u1^2 u2^2 ].
/// At s = 1 this coincides with rp_variance for every input.
double vw_variance(const SparseRealVector& u1, const SparseRealVector& u2, double s, uint32_t k);

} // namespace hashlearn
