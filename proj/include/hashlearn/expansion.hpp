#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hashlearn/bucket_hash.hpp"
#include "hashlearn/minwise.hpp"
#include "hashlearn/sparse_vector.hpp"

namespace hashlearn {

/// One-hot encoding of a b-bit sketch: k blocks of width 2^b, exactly one
/// active position per block. Within block j the active offset is
/// 2^b - 1 - value_j, so inner products of encodings count matching sketch
/// positions. Stored sparsely as the k active global indices.
struct ExpandedVector {
    std::vector<uint64_t> active; // ascending, one index per block
    uint64_t dim = 0;             // 2^b * k
    uint32_t block_size = 0;      // 2^b

    uint32_t k() const { return static_cast<uint32_t>(active.size()); }
};

ExpandedVector expand_bbit(const BBitSketch& sketch);

/// Number of shared active positions; equals k * estimate_Pb of the
/// underlying sketches.
uint32_t dot(const ExpandedVector& a, const ExpandedVector& b);

/// View as a 0/1 sparse real vector over [0, dim).
SparseRealVector to_sparse_real(const ExpandedVector& e);

/// Per-record pipeline: minwise sketch, keep b bits, expand. An empty
/// record is an error naming its position in the stream.
template <class Hasher>
ExpandedVector encode_record(const SparseBinarySet& s, const Hasher& hasher, uint8_t b) {
    return expand_bbit(truncate_to_b_bits(minwise_sketch(s, hasher), b));
}

/// Single-pass, order-preserving encoding of a whole dataset.
template <class Hasher>
std::vector<std::pair<ExpandedVector, int8_t>> encode_dataset(const std::vector<LabeledSet>& records,
                                                              const Hasher& hasher, uint8_t b) {
    std::vector<std::pair<ExpandedVector, int8_t>> out;
    out.reserve(records.size());
    for (size_t i = 0; i < records.size(); ++i) {
        if (records[i].set.empty()) {
            throw std::invalid_argument("encode_dataset: record " + std::to_string(i) + " is empty");
        }
        out.emplace_back(encode_record(records[i].set, hasher, b), records[i].label);
    }
    return out;
}

/// Optional compression layer: signed bucket hashing applied to the
/// expanded vector, for when 2^b * k is much larger than k. Requires
/// spec.k < e.dim.
std::vector<double> compress_expanded_with_vw(const ExpandedVector& e, const BucketHashSpec& spec);

} // namespace hashlearn
