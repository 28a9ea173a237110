#include "hashlearn/sparse_vector.hpp"

#include <stdexcept>

namespace hashlearn {

SparseRealVector SparseRealVector::from_entries(std::vector<std::pair<uint64_t, double>> entries,
                                                uint64_t universe_size) {
    for (size_t i = 0; i < entries.size(); ++i) {
        if (i > 0 && entries[i].first <= entries[i - 1].first) {
            throw std::invalid_argument("vector indices must be strictly increasing");
        }
        if (entries[i].first >= universe_size) {
            throw std::invalid_argument("vector index outside universe");
        }
        if (entries[i].second == 0.0) {
            throw std::invalid_argument("explicit zeros are not stored");
        }
    }
    return SparseRealVector{std::move(entries), universe_size};
}

SparseRealVector SparseRealVector::from_set(const SparseBinarySet& s) {
    SparseRealVector v;
    v.universe_size = s.universe_size;
    v.entries.reserve(s.indices.size());
    for (const uint64_t idx : s.indices) v.entries.emplace_back(idx, 1.0);
    return v;
}

double dot(const SparseRealVector& u1, const SparseRealVector& u2) {
    double sum = 0.0;
    size_t i = 0, j = 0;
    while (i < u1.entries.size() && j < u2.entries.size()) {
        if (u1.entries[i].first < u2.entries[j].first) {
            ++i;
        } else if (u1.entries[i].first > u2.entries[j].first) {
            ++j;
        } else {
            sum += u1.entries[i].second * u2.entries[j].second;
            ++i;
            ++j;
        }
    }
    return sum;
}

PairMoments pair_moments(const SparseRealVector& u1, const SparseRealVector& u2) {
    if (u1.universe_size != u2.universe_size) {
        throw std::invalid_argument("pair_moments: universe sizes differ");
    }
    PairMoments m;
    for (const auto& [idx, val] : u1.entries) {
        (void)idx;
        m.sum_sq_1 += val * val;
    }
    for (const auto& [idx, val] : u2.entries) {
        (void)idx;
        m.sum_sq_2 += val * val;
    }
    size_t i = 0, j = 0;
    while (i < u1.entries.size() && j < u2.entries.size()) {
        if (u1.entries[i].first < u2.entries[j].first) {
            ++i;
        } else if (u1.entries[i].first > u2.entries[j].first) {
            ++j;
        } else {
            const double prod = u1.entries[i].second * u2.entries[j].second;
            m.inner += prod;
            m.sum_sq_prod += prod * prod;
            ++i;
            ++j;
        }
    }
    return m;
}

} // namespace hashlearn
