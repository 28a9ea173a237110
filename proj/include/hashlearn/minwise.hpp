#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hashlearn/hash_family.hpp"
#include "hashlearn/sparse_set.hpp"

namespace hashlearn {

/// k minwise hash values z_j = min over the set of the j-th remapped ids.
struct MinwiseSketch {
    std::vector<uint64_t> values;

    uint32_t k() const { return static_cast<uint32_t>(values.size()); }
};

/// Sketch a nonempty set against a hash family (2-universal or explicit
/// permutations). Deterministic given the family; input order of the set
/// does not matter since only the minimum survives.
template <class Hasher>
MinwiseSketch minwise_sketch(const SparseBinarySet& s, const Hasher& hasher) {
    if (s.empty()) throw std::invalid_argument("minwise_sketch: empty set has no minimum");
    const uint32_t k = hasher.size();
    MinwiseSketch sketch;
    sketch.values.resize(k);
    for (uint32_t j = 0; j < k; ++j) {
        uint64_t best = apply_hash(hasher, j, s.indices[0]);
        for (size_t i = 1; i < s.indices.size(); ++i) {
            const uint64_t h = apply_hash(hasher, j, s.indices[i]);
            if (h < best) best = h;
        }
        sketch.values[j] = best;
    }
    return sketch;
}

/// Fraction of positions where the full hash values collide: the unbiased
/// estimator of R from k permutations.
double estimate_resemblance_full(const MinwiseSketch& a, const MinwiseSketch& b);

/// Variance of the full estimator, R(1-R)/k.
double variance_full(double R, uint32_t k);

/// k values of b bits each: the lowest b bits of each minwise value.
struct BBitSketch {
    std::vector<uint16_t> values;
    uint8_t bits = 0;

    uint32_t k() const { return static_cast<uint32_t>(values.size()); }
};

/// Keep only the lowest b bits of each value, 1 <= b <= 16.
BBitSketch truncate_to_b_bits(const MinwiseSketch& m, uint8_t b);

/// The constants of the b-bit collision probability
///   P_b = C1b + (1 - C2b) R
/// in the large-D regime, computed from the sparsity ratios r1 = f1/D and
/// r2 = f2/D:
///   A_{i,b} = r_i (1-r_i)^(2^b - 1) / (1 - (1-r_i)^(2^b))
///   C1b = A1b r2/(r1+r2) + A2b r1/(r1+r2)
///   C2b = A1b r1/(r1+r2) + A2b r2/(r1+r2)
/// As r1, r2 -> 0 all four constants tend to 2^-b.
struct BBitParams {
    double r1 = 0, r2 = 0;
    double A1b = 0, A2b = 0, C1b = 0, C2b = 0;
    uint8_t bits = 0;
};

BBitParams bbit_params(uint64_t f1, uint64_t f2, uint64_t universe_size, uint8_t b);

/// Fraction of positions where all b bits agree.
double estimate_Pb(const BBitSketch& a, const BBitSketch& b);

/// P_b = C1b + (1 - C2b) R.
double collision_probability_bbit(const BBitParams& params, double R);

/// R estimate inverted from an observed P_b. Deliberately unclamped: noisy
/// p_hat can land outside [0, 1], which out_of_range flags.
struct BBitEstimate {
    double value = 0;
    bool out_of_range = false;
};

BBitEstimate estimate_resemblance_bbit(double p_hat, const BBitParams& params);

/// Variance of the b-bit estimator: P_b(1-P_b) / (k (1-C2b)^2).
double variance_bbit(double R, const BBitParams& params, uint32_t k);

} // namespace hashlearn
