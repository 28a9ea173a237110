#include "hashlearn/sparse_set.hpp"

#include <stdexcept>
#include <string>

namespace hashlearn {

SparseBinarySet SparseBinarySet::from_indices(std::vector<uint64_t> indices, uint64_t universe_size) {
    for (size_t i = 0; i < indices.size(); ++i) {
        if (i > 0 && indices[i] <= indices[i - 1]) {
            throw std::invalid_argument("set indices must be strictly increasing");
        }
        if (indices[i] >= universe_size) {
            throw std::invalid_argument("set index " + std::to_string(indices[i]) +
                                        " outside universe [0, " + std::to_string(universe_size) + ")");
        }
    }
    return SparseBinarySet{std::move(indices), universe_size};
}

uint64_t intersection_size(const SparseBinarySet& s1, const SparseBinarySet& s2) {
    uint64_t count = 0;
    size_t i = 0, j = 0;
    while (i < s1.indices.size() && j < s2.indices.size()) {
        if (s1.indices[i] < s2.indices[j]) {
            ++i;
        } else if (s1.indices[i] > s2.indices[j]) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

double resemblance(const SparseBinarySet& s1, const SparseBinarySet& s2) {
    if (s1.universe_size != s2.universe_size) {
        throw std::invalid_argument("resemblance: universe sizes differ");
    }
    const uint64_t f1 = s1.cardinality();
    const uint64_t f2 = s2.cardinality();
    if (f1 == 0 && f2 == 0) return 1.0;
    const uint64_t a = intersection_size(s1, s2);
    return static_cast<double>(a) / static_cast<double>(f1 + f2 - a);
}

} // namespace hashlearn
