#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hashlearn/dataset.hpp"
#include "hashlearn/learner.hpp"
#include "hashlearn/rng.hpp"

namespace hashlearn {

// ---------- constructed set pairs for Monte Carlo verification ----------

/// Integer geometry of a two-set configuration inside [0, D):
/// |S1| = f1, |S2| = f2, |S1 n S2| = a. Estimators are compared against the
/// realized resemblance a/(f1+f2-a), not the pre-rounding target.
struct PairGeometry {
    uint64_t universe_size = 0;
    uint64_t f1 = 0;
    uint64_t f2 = 0;
    uint64_t a = 0;

    uint64_t union_size() const { return f1 + f2 - a; }
    double resemblance() const {
        return static_cast<double>(a) / static_cast<double>(union_size());
    }
    double r1() const { return static_cast<double>(f1) / static_cast<double>(universe_size); }
    double r2() const { return static_cast<double>(f2) / static_cast<double>(universe_size); }
};

/// Round (r1*D, r2*D, R*union) to integers and validate feasibility
/// (a <= min(f1, f2), union <= D, f1, f2 >= 1).
PairGeometry make_pair_geometry(uint64_t universe_size, double r1, double r2, double R_target);

/// What one random permutation of the universe reduces to for this pair:
/// the minimum remapped id of each set (shared elements contribute to
/// both). Sampled exactly -- the union's values are a uniform random
/// subset of [0, D) assigned to elements in random order -- without ever
/// materializing the permutation.
struct MinPair {
    uint64_t z1 = 0;
    uint64_t z2 = 0;
};

MinPair sample_min_pair(const PairGeometry& g, SeqRng& rng);

/// Just the indicator {z1 == z2}: true iff the first-ranked union element
/// is shared, so a single draw suffices. P(true) = a / union exactly.
bool sample_min_collision(const PairGeometry& g, SeqRng& rng);

// ---------- closed form vs Monte Carlo ----------

enum class FormulaId : uint8_t { eq2, thm1, eq8, eq14, eq18 };

const char* formula_name(FormulaId id);
FormulaId formula_from_name(const std::string& name);

struct McParams {
    uint64_t universe_size = uint64_t{1} << 16;
    double r1 = 0.005;
    double r2 = 0.005;
    double resemblance = 0.5; // target, rounded to the realized geometry
    uint8_t b = 1;            // thm1 / eq8
    uint32_t k = 100;
    double s = 1.0;           // eq14 / eq18
    uint32_t f = 100;         // support size of the test vectors (eq14 / eq18)
};

struct McCheck {
    std::string name;
    double expected = 0;
    double observed = 0;
    double error = 0;     // absolute or relative, per the name
    double tolerance = 0;
    bool pass = false;
};

struct McReport {
    FormulaId formula = FormulaId::eq2;
    std::vector<McCheck> checks;

    bool all_pass() const {
        for (const McCheck& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }
};

/// Closed-form means/variances vs their empirical counterparts:
///   eq2  -- full minwise estimator, mean and variance
///   thm1 -- pooled b-bit collision fraction vs C1b + (1 - C2b) R
///   eq8  -- b-bit estimator, mean and variance
///   eq14 -- random projection inner-product estimator, mean and variance
///   eq18 -- signed bucket estimator, mean and variance, plus the exact
///           s = 1 identity with eq14
/// Requires trials >= 1000. Deterministic given (params, trials, seed).
McReport run_mc_verify(FormulaId formula, const McParams& params, uint64_t trials, uint64_t seed);

// ---------- train/eval grid ----------

enum class Method : uint8_t { bbit, vw, rp, raw };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct GridConfig {
    std::vector<Method> methods{Method::bbit};
    std::vector<uint32_t> k_list{64};
    std::vector<uint8_t> b_list{8};
    std::vector<double> c_list = default_c_grid();
    LossKind loss = LossKind::hinge;
    double rp_s = 1.0;
    double split = 0.8; // train fraction
    uint32_t trials = 1;
    uint32_t epochs = 20;
    uint64_t seed = 0;
    uint32_t threads = 1;
};

/// One grid cell, averaged over trials. b is 0 for methods that have no
/// bit depth (vw, rp, raw); k is 0 for raw. The two bits_per_example
/// columns carry the 32- and 16-bit-per-bucket storage accountings, which
/// only differ for dense-bucket methods; raw is the un-hashed reference
/// and reports 0.
struct GridRow {
    Method method = Method::bbit;
    uint32_t k = 0;
    uint8_t b = 0;
    double C = 0;
    uint64_t bits_per_example_32 = 0;
    uint64_t bits_per_example_16 = 0;
    double accuracy = 0;
    double train_seconds = 0;
};

/// Full sweep: per trial, a fresh train/test split and fresh hash seeds;
/// per cell, encode once and train across the C list. Every column except
/// train_seconds is deterministic given (data, cfg), independent of the
/// thread count.
std::vector<GridRow> run_grid(const std::vector<LabeledSet>& data, const GridConfig& cfg);

uint64_t bits_per_example(Method m, uint32_t k, uint8_t b, uint32_t bits_per_bucket);

} // namespace hashlearn
