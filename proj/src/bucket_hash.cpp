#include "hashlearn/bucket_hash.hpp"

#include <stdexcept>

#include "hashlearn/projection.hpp"
#include "hashlearn/rng.hpp"

namespace hashlearn {

namespace {

void check_spec(const BucketHashSpec& spec) {
    if (spec.k < 1) throw std::invalid_argument("bucket hash: k must be >= 1");
    if (spec.s < 1.0) throw std::invalid_argument("bucket hash: s must be >= 1");
}

} // namespace

uint32_t bucket_of(const BucketHashSpec& spec, uint64_t i) {
    return static_cast<uint32_t>(SplitRng(spec.bucket_seed).below_at(i, spec.k));
}

double sign_of(const BucketHashSpec& spec, uint64_t i) {
    return signed_entry_from_word(SplitRng(spec.sign_seed).at(i), spec.s);
}

std::vector<double> cm_bucket(const SparseRealVector& u, const BucketHashSpec& spec) {
    check_spec(spec);
    std::vector<double> w(spec.k, 0.0);
    for (const auto& [idx, val] : u.entries) w[bucket_of(spec, idx)] += val;
    return w;
}

double cm_estimate_biased(std::span<const double> w1, std::span<const double> w2) {
    if (w1.size() != w2.size() || w1.empty()) {
        throw std::invalid_argument("cm_estimate_biased: length mismatch");
    }
    double sum = 0.0;
    for (size_t j = 0; j < w1.size(); ++j) sum += w1[j] * w2[j];
    return sum;
}

std::vector<double> vw_hash(const SparseRealVector& u, const BucketHashSpec& spec) {
    check_spec(spec);
    std::vector<double> g(spec.k, 0.0);
    for (const auto& [idx, val] : u.entries) {
        g[bucket_of(spec, idx)] += val * sign_of(spec, idx);
    }
    return g;
}

double vw_estimate_inner(std::span<const double> g1, std::span<const double> g2) {
    if (g1.size() != g2.size() || g1.empty()) {
        throw std::invalid_argument("vw_estimate_inner: length mismatch");
    }
    double sum = 0.0;
    for (size_t j = 0; j < g1.size(); ++j) sum += g1[j] * g2[j];
    return sum;
}

double vw_variance(const SparseRealVector& u1, const SparseRealVector& u2, double s, uint32_t k) {
    if (k < 1) throw std::invalid_argument("vw_variance: k must be >= 1");
    const PairMoments m = pair_moments(u1, u2);
    return (s - 1.0) * m.sum_sq_prod +
           (m.sum_sq_1 * m.sum_sq_2 + m.inner * m.inner - 2.0 * m.sum_sq_prod) /
               static_cast<double>(k);
}

} // namespace hashlearn
