#include "hashlearn/expansion.hpp"

#include <stdexcept>
#include <string>

namespace hashlearn {

ExpandedVector expand_bbit(const BBitSketch& sketch) {
    if (sketch.bits < 1 || sketch.bits > 16) {
        throw std::invalid_argument("expand_bbit: bits must be in [1,16], got " +
                                    std::to_string(sketch.bits));
    }
    const uint32_t block = uint32_t{1} << sketch.bits;
    ExpandedVector e;
    e.block_size = block;
    e.dim = static_cast<uint64_t>(block) * sketch.values.size();
    e.active.reserve(sketch.values.size());
    for (size_t j = 0; j < sketch.values.size(); ++j) {
        const uint16_t v = sketch.values[j];
        if (v >= block) {
            throw std::invalid_argument("expand_bbit: value " + std::to_string(v) +
                                        " at position " + std::to_string(j) +
                                        " exceeds 2^b - 1");
        }
        // Highest sketch value maps to the first slot of the block.
        e.active.push_back(static_cast<uint64_t>(j) * block + (block - 1 - v));
    }
    return e;
}

uint32_t dot(const ExpandedVector& a, const ExpandedVector& b) {
    if (a.dim != b.dim || a.block_size != b.block_size) {
        throw std::invalid_argument("dot: expanded vectors have mismatched shapes");
    }
    if (a.active.size() != b.active.size()) {
        throw std::invalid_argument("dot: expanded vectors have different k");
    }
    uint32_t matches = 0;
    for (size_t j = 0; j < a.active.size(); ++j) {
        if (a.active[j] == b.active[j]) ++matches;
    }
    return matches;
}

SparseRealVector to_sparse_real(const ExpandedVector& e) {
    std::vector<std::pair<uint64_t, double>> entries;
    entries.reserve(e.active.size());
    for (uint64_t idx : e.active) entries.emplace_back(idx, 1.0);
    return SparseRealVector::from_entries(std::move(entries), e.dim);
}

std::vector<double> compress_expanded_with_vw(const ExpandedVector& e, const BucketHashSpec& spec) {
    if (spec.k >= e.dim) {
        throw std::invalid_argument("compress_expanded_with_vw: target k " + std::to_string(spec.k) +
                                    " must be smaller than expanded dim " + std::to_string(e.dim));
    }
    return vw_hash(to_sparse_real(e), spec);
}

} // namespace hashlearn
