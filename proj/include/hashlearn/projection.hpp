#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hashlearn/sparse_vector.hpp"

namespace hashlearn {

/// Entry distribution shared by random projections and the signed bucket
/// hash: sqrt(s) * {+1 w.p. 1/(2s), 0 w.p. 1 - 1/s, -1 w.p. 1/(2s)}.
/// Mean 0, variance 1, third moment 0, fourth moment s. s = 1 degenerates
/// to a fair +-1 coin.
double signed_entry_from_word(uint64_t word, double s);

/// Random projection to k dimensions. Entries r_ij are regenerated
/// deterministically from (seed, i, j); the D x k matrix is never stored.
struct ProjectionSpec {
    uint32_t k = 0;
    double s = 1.0;
    uint64_t seed = 0;
};

/// r_ij for this spec.
double projection_entry(const ProjectionSpec& spec, uint64_t i, uint32_t j);

/// v_j = sum_i u_i r_ij.
std::vector<double> rp_project(const SparseRealVector& u, const ProjectionSpec& spec);

/// (1/k) sum_j v1_j v2_j, the unbiased inner-product estimate.
double rp_estimate_inner(std::span<const double> v1, std::span<const double> v2);

/// (1/k) [ sum u1^2 sum u2^2 + (sum u1 u2)^2 + (s-3) sum u1^2 u2^2 ].
double rp_variance(const SparseRealVector& u1, const SparseRealVector& u2, double s, uint32_t k);

} // namespace hashlearn
