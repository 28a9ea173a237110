#include "hashlearn/minwise.hpp"

#include <cmath>

namespace hashlearn {

double estimate_resemblance_full(const MinwiseSketch& a, const MinwiseSketch& b) {
    if (a.values.size() != b.values.size() || a.values.empty()) {
        throw std::invalid_argument("estimate_resemblance_full: sketch lengths differ or are zero");
    }
    uint32_t matches = 0;
    for (size_t j = 0; j < a.values.size(); ++j) {
        if (a.values[j] == b.values[j]) ++matches;
    }
    return static_cast<double>(matches) / static_cast<double>(a.values.size());
}

double variance_full(double R, uint32_t k) {
    if (R < 0.0 || R > 1.0) throw std::invalid_argument("variance_full: R outside [0, 1]");
    if (k < 1) throw std::invalid_argument("variance_full: k must be >= 1");
    return R * (1.0 - R) / static_cast<double>(k);
}

BBitSketch truncate_to_b_bits(const MinwiseSketch& m, uint8_t b) {
    if (b < 1 || b > 16) throw std::invalid_argument("truncate_to_b_bits: b must be in [1, 16]");
    const uint64_t mask = (1ULL << b) - 1;
    BBitSketch sketch;
    sketch.bits = b;
    sketch.values.resize(m.values.size());
    for (size_t j = 0; j < m.values.size(); ++j) {
        sketch.values[j] = static_cast<uint16_t>(m.values[j] & mask);
    }
    return sketch;
}

namespace {

// r (1-r)^(2^b - 1) / (1 - (1-r)^(2^b)), with the denominator evaluated via
// expm1/log1p so tiny r does not lose precision to cancellation.
double theorem_constant(double r, uint8_t b) {
    const double m = static_cast<double>(1ULL << b);
    const double log1mr = std::log1p(-r);
    const double numerator = r * std::exp((m - 1.0) * log1mr);
    const double denominator = -std::expm1(m * log1mr);
    return numerator / denominator;
}

} // namespace

BBitParams bbit_params(uint64_t f1, uint64_t f2, uint64_t universe_size, uint8_t b) {
    if (b < 1 || b > 16) throw std::invalid_argument("bbit_params: b must be in [1, 16]");
    if (f1 == 0 || f2 == 0) throw std::invalid_argument("bbit_params: zero cardinality");
    if (f1 > universe_size || f2 > universe_size) {
        throw std::invalid_argument("bbit_params: cardinality exceeds universe");
    }
    BBitParams params;
    params.bits = b;
    params.r1 = static_cast<double>(f1) / static_cast<double>(universe_size);
    params.r2 = static_cast<double>(f2) / static_cast<double>(universe_size);
    params.A1b = theorem_constant(params.r1, b);
    params.A2b = theorem_constant(params.r2, b);
    const double w1 = params.r1 / (params.r1 + params.r2);
    const double w2 = params.r2 / (params.r1 + params.r2);
    params.C1b = params.A1b * w2 + params.A2b * w1;
    params.C2b = params.A1b * w1 + params.A2b * w2;
    return params;
}

double estimate_Pb(const BBitSketch& a, const BBitSketch& b) {
    if (a.bits != b.bits) throw std::invalid_argument("estimate_Pb: bit widths differ");
    if (a.values.size() != b.values.size() || a.values.empty()) {
        throw std::invalid_argument("estimate_Pb: sketch lengths differ or are zero");
    }
    uint32_t matches = 0;
    for (size_t j = 0; j < a.values.size(); ++j) {
        if (a.values[j] == b.values[j]) ++matches;
    }
    return static_cast<double>(matches) / static_cast<double>(a.values.size());
}

double collision_probability_bbit(const BBitParams& params, double R) {
    return params.C1b + (1.0 - params.C2b) * R;
}

BBitEstimate estimate_resemblance_bbit(double p_hat, const BBitParams& params) {
    if (params.C2b == 1.0) throw std::invalid_argument("estimate_resemblance_bbit: C2b = 1");
    BBitEstimate est;
    est.value = (p_hat - params.C1b) / (1.0 - params.C2b);
    est.out_of_range = est.value < 0.0 || est.value > 1.0;
    return est;
}

double variance_bbit(double R, const BBitParams& params, uint32_t k) {
    if (k < 1) throw std::invalid_argument("variance_bbit: k must be >= 1");
    const double pb = collision_probability_bbit(params, R);
    const double denom = 1.0 - params.C2b;
    return pb * (1.0 - pb) / (static_cast<double>(k) * denom * denom);
}

} // namespace hashlearn
