#pragma once

#include <cstdint>
#include <vector>

namespace hashlearn {

/// A data point as a set of nonzero feature ids over the universe [0, D).
/// Indices are strictly increasing with no duplicates.
struct SparseBinarySet {
    std::vector<uint64_t> indices;
    uint64_t universe_size = 0;

    uint64_t cardinality() const { return indices.size(); }
    bool empty() const { return indices.empty(); }

    /// Sparsity ratio r = f / D.
    double sparsity() const {
        return static_cast<double>(indices.size()) / static_cast<double>(universe_size);
    }

    /// Validating factory; throws std::invalid_argument on unsorted,
    /// duplicated, or out-of-range indices.
    static SparseBinarySet from_indices(std::vector<uint64_t> indices, uint64_t universe_size);
};

struct LabeledSet {
    SparseBinarySet set;
    int8_t label = 1; // -1 or +1
};

/// Resemblance R = |S1 n S2| / |S1 u S2|. Two empty sets resemble each
/// other fully (R = 1). Throws on universe mismatch.
double resemblance(const SparseBinarySet& s1, const SparseBinarySet& s2);

/// |S1 n S2| for sorted index sets.
uint64_t intersection_size(const SparseBinarySet& s1, const SparseBinarySet& s2);

} // namespace hashlearn
