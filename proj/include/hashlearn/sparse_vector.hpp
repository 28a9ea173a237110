#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hashlearn/sparse_set.hpp"

namespace hashlearn {

/// A D-dimensional real vector stored as (index, value) pairs with strictly
/// increasing indices and no explicit zeros.
struct SparseRealVector {
    std::vector<std::pair<uint64_t, double>> entries;
    uint64_t universe_size = 0;

    size_t nnz() const { return entries.size(); }

    static SparseRealVector from_entries(std::vector<std::pair<uint64_t, double>> entries,
                                         uint64_t universe_size);
    /// 0/1 indicator vector of a binary set.
    static SparseRealVector from_set(const SparseBinarySet& s);
};

double dot(const SparseRealVector& u1, const SparseRealVector& u2);

/// The four sums the variance formulas are built from.
struct PairMoments {
    double sum_sq_1 = 0;      // sum u1_i^2
    double sum_sq_2 = 0;      // sum u2_i^2
    double inner = 0;         // sum u1_i u2_i
    double sum_sq_prod = 0;   // sum u1_i^2 u2_i^2
};

PairMoments pair_moments(const SparseRealVector& u1, const SparseRealVector& u2);

} // namespace hashlearn
