#include "hashlearn/projection.hpp"

#include <cmath>
#include <stdexcept>

#include "hashlearn/rng.hpp"

namespace hashlearn {

double signed_entry_from_word(uint64_t word, double s) {
    const double u = static_cast<double>(word >> 11) * 0x1.0p-53;
    const double half = 0.5 / s;
    if (u < half) return std::sqrt(s);
    if (u < 2.0 * half) return -std::sqrt(s);
    return 0.0;
}

namespace {

void check_spec(const ProjectionSpec& spec) {
    if (spec.k < 1) throw std::invalid_argument("projection: k must be >= 1");
    if (spec.s < 1.0) throw std::invalid_argument("projection: s must be >= 1");
}

} // namespace

double projection_entry(const ProjectionSpec& spec, uint64_t i, uint32_t j) {
    const SplitRng column = SplitRng(spec.seed).split(j);
    return signed_entry_from_word(column.at(i), spec.s);
}

std::vector<double> rp_project(const SparseRealVector& u, const ProjectionSpec& spec) {
    check_spec(spec);
    std::vector<double> v(spec.k, 0.0);
    const SplitRng root(spec.seed);
    for (uint32_t j = 0; j < spec.k; ++j) {
        const SplitRng column = root.split(j);
        double sum = 0.0;
        for (const auto& [idx, val] : u.entries) {
            sum += val * signed_entry_from_word(column.at(idx), spec.s);
        }
        v[j] = sum;
    }
    return v;
}

double rp_estimate_inner(std::span<const double> v1, std::span<const double> v2) {
    if (v1.size() != v2.size() || v1.empty()) {
        throw std::invalid_argument("rp_estimate_inner: length mismatch");
    }
    double sum = 0.0;
    for (size_t j = 0; j < v1.size(); ++j) sum += v1[j] * v2[j];
    return sum / static_cast<double>(v1.size());
}

double rp_variance(const SparseRealVector& u1, const SparseRealVector& u2, double s, uint32_t k) {
    if (k < 1) throw std::invalid_argument("rp_variance: k must be >= 1");
    const PairMoments m = pair_moments(u1, u2);
    return (m.sum_sq_1 * m.sum_sq_2 + m.inner * m.inner + (s - 3.0) * m.sum_sq_prod) /
           static_cast<double>(k);
}

} // namespace hashlearn
