#include "hashlearn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "hashlearn/bucket_hash.hpp"
#include "hashlearn/expansion.hpp"
#include "hashlearn/minwise.hpp"
#include "hashlearn/projection.hpp"

namespace hashlearn {

PairGeometry make_pair_geometry(uint64_t universe_size, double r1, double r2, double R_target) {
    if (universe_size < 2) throw std::invalid_argument("pair geometry: universe must be >= 2");
    if (!(r1 > 0.0 && r1 <= 1.0) || !(r2 > 0.0 && r2 <= 1.0)) {
        throw std::invalid_argument("pair geometry: sparsities must be in (0, 1]");
    }
    if (!(R_target >= 0.0 && R_target <= 1.0)) {
        throw std::invalid_argument("pair geometry: resemblance must be in [0, 1]");
    }
    PairGeometry g;
    g.universe_size = universe_size;
    g.f1 = static_cast<uint64_t>(std::llround(r1 * static_cast<double>(universe_size)));
    g.f2 = static_cast<uint64_t>(std::llround(r2 * static_cast<double>(universe_size)));
    if (g.f1 < 1 || g.f2 < 1) throw std::invalid_argument("pair geometry: sparsity rounds to an empty set");
    g.a = static_cast<uint64_t>(
        std::llround(R_target * static_cast<double>(g.f1 + g.f2) / (1.0 + R_target)));
    if (g.a > std::min(g.f1, g.f2)) {
        throw std::invalid_argument(
            "pair geometry: resemblance " + std::to_string(R_target) +
            " is unreachable at these set sizes (intersection would exceed the smaller set)");
    }
    if (g.union_size() > universe_size) {
        throw std::invalid_argument("pair geometry: union exceeds the universe");
    }
    return g;
}

MinPair sample_min_pair(const PairGeometry& g, SeqRng& rng) {
    // The permutation reduces to (a) a uniform random union-sized subset of
    // [0, D) as the value set and (b) a uniform random assignment of those
    // values to elements. Walk the values in increasing order, drawing each
    // one's element group hypergeometrically, until both sets have seen
    // their minimum. Everything is exact integer arithmetic.
    uint64_t na = g.a;
    uint64_t n1 = g.f1 - g.a;
    uint64_t n2 = g.f2 - g.a;
    uint64_t m = na + n1 + n2; // ranks not yet assigned
    uint64_t rem = m;          // values not yet revealed
    uint64_t v = 0;            // next candidate value
    const uint64_t D = g.universe_size;
    bool have1 = false;
    bool have2 = false;
    MinPair out;
    while (!(have1 && have2)) {
        // Next order statistic: accept v with probability rem / (D - v).
        while (rng.next_below(D - v) >= rem) ++v;
        const uint64_t x = rng.next_below(m);
        if (x < na) {
            if (!have1) { out.z1 = v; have1 = true; }
            if (!have2) { out.z2 = v; have2 = true; }
            --na;
        } else if (x < na + n1) {
            if (!have1) { out.z1 = v; have1 = true; }
            --n1;
        } else {
            if (!have2) { out.z2 = v; have2 = true; }
            --n2;
        }
        --m;
        --rem;
        ++v;
    }
    return out;
}

bool sample_min_collision(const PairGeometry& g, SeqRng& rng) {
    return rng.next_below(g.union_size()) < g.a;
}

const char* formula_name(FormulaId id) {
    switch (id) {
        case FormulaId::eq2: return "eq2";
        case FormulaId::thm1: return "thm1";
        case FormulaId::eq8: return "eq8";
        case FormulaId::eq14: return "eq14";
        case FormulaId::eq18: return "eq18";
    }
    return "?";
}

FormulaId formula_from_name(const std::string& name) {
    if (name == "eq2") return FormulaId::eq2;
    if (name == "thm1") return FormulaId::thm1;
    if (name == "eq8") return FormulaId::eq8;
    if (name == "eq14") return FormulaId::eq14;
    if (name == "eq18") return FormulaId::eq18;
    throw std::invalid_argument("unknown formula id: " + name +
                                " (want eq2, thm1, eq8, eq14, or eq18)");
}

namespace {

struct RunningMoments {
    uint64_t n = 0;
    double mean = 0;
    double m2 = 0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double sample_variance() const { return m2 / static_cast<double>(n - 1); }
};

McCheck mean_check(std::string name, double expected, double observed, double closed_var,
                   uint64_t trials) {
    McCheck c;
    c.name = std::move(name) + " |mean - expected| vs 3*SE";
    c.expected = expected;
    c.observed = observed;
    c.error = std::abs(observed - expected);
    c.tolerance = 3.0 * std::sqrt(closed_var / static_cast<double>(trials));
    c.pass = c.error < c.tolerance;
    return c;
}

McCheck variance_check(std::string name, double expected, double observed) {
    McCheck c;
    c.name = std::move(name) + " variance relative error";
    c.expected = expected;
    c.observed = observed;
    c.error = std::abs(observed / expected - 1.0);
    c.tolerance = 0.10;
    c.pass = c.error < c.tolerance;
    return c;
}

/// Deterministic pair of overlapping test vectors for the inner-product
/// estimators: supports [0, f) and [f/2, f/2 + f), uniform values in
/// (-1, 1).
std::pair<SparseRealVector, SparseRealVector> make_test_vectors(uint32_t f, const SplitRng& root) {
    const uint64_t universe = 2 * static_cast<uint64_t>(f);
    const SplitRng vals1 = root.split(10);
    const SplitRng vals2 = root.split(11);
    auto value_at = [](const SplitRng& r, uint64_t c) {
        double v = 2.0 * r.unit_at(c) - 1.0;
        if (v == 0.0) v = 0.5;
        return v;
    };
    std::vector<std::pair<uint64_t, double>> e1, e2;
    e1.reserve(f);
    e2.reserve(f);
    for (uint32_t i = 0; i < f; ++i) {
        e1.emplace_back(i, value_at(vals1, i));
        e2.emplace_back(f / 2 + i, value_at(vals2, i));
    }
    return {SparseRealVector::from_entries(std::move(e1), universe),
            SparseRealVector::from_entries(std::move(e2), universe)};
}

} // namespace

McReport run_mc_verify(FormulaId formula, const McParams& params, uint64_t trials, uint64_t seed) {
    if (trials < 1000) throw std::invalid_argument("mc-verify: need at least 1000 trials");
    if (params.k < 1) throw std::invalid_argument("mc-verify: k must be >= 1");
    const SplitRng root(seed);
    McReport report;
    report.formula = formula;

    switch (formula) {
        case FormulaId::eq2: {
            const PairGeometry g = make_pair_geometry(params.universe_size, params.r1, params.r2,
                                                      params.resemblance);
            const double R = g.resemblance();
            SeqRng rng(root.split(1));
            RunningMoments est;
            for (uint64_t t = 0; t < trials; ++t) {
                uint32_t hits = 0;
                for (uint32_t j = 0; j < params.k; ++j) {
                    if (sample_min_collision(g, rng)) ++hits;
                }
                est.add(static_cast<double>(hits) / params.k);
            }
            const double closed_var = variance_full(R, params.k);
            report.checks.push_back(mean_check("R_hat", R, est.mean, closed_var, trials));
            report.checks.push_back(variance_check("R_hat", closed_var, est.sample_variance()));
            break;
        }
        case FormulaId::thm1: {
            if (params.b < 1 || params.b > 16) throw std::invalid_argument("mc-verify: b must be in [1,16]");
            const PairGeometry g = make_pair_geometry(params.universe_size, params.r1, params.r2,
                                                      params.resemblance);
            const BBitParams bp = bbit_params(g.f1, g.f2, g.universe_size, params.b);
            const double pb = collision_probability_bbit(bp, g.resemblance());
            const uint64_t mask = (uint64_t{1} << params.b) - 1;
            SeqRng rng(root.split(2));
            uint64_t hits = 0;
            const uint64_t samples = trials * params.k;
            for (uint64_t t = 0; t < samples; ++t) {
                const MinPair mp = sample_min_pair(g, rng);
                if ((mp.z1 & mask) == (mp.z2 & mask)) ++hits;
            }
            McCheck c;
            c.name = "P_b pooled |observed - closed| (abs)";
            c.expected = pb;
            c.observed = static_cast<double>(hits) / static_cast<double>(samples);
            c.error = std::abs(c.observed - c.expected);
            c.tolerance = 0.01;
            c.pass = c.error < c.tolerance;
            report.checks.push_back(c);
            break;
        }
        case FormulaId::eq8: {
            if (params.b < 1 || params.b > 16) throw std::invalid_argument("mc-verify: b must be in [1,16]");
            const PairGeometry g = make_pair_geometry(params.universe_size, params.r1, params.r2,
                                                      params.resemblance);
            const BBitParams bp = bbit_params(g.f1, g.f2, g.universe_size, params.b);
            const double R = g.resemblance();
            const uint64_t mask = (uint64_t{1} << params.b) - 1;
            SeqRng rng(root.split(3));
            RunningMoments est;
            for (uint64_t t = 0; t < trials; ++t) {
                uint32_t hits = 0;
                for (uint32_t j = 0; j < params.k; ++j) {
                    const MinPair mp = sample_min_pair(g, rng);
                    if ((mp.z1 & mask) == (mp.z2 & mask)) ++hits;
                }
                const double phat = static_cast<double>(hits) / params.k;
                est.add(estimate_resemblance_bbit(phat, bp).value);
            }
            const double closed_var = variance_bbit(R, bp, params.k);
            report.checks.push_back(mean_check("R_hat_b", R, est.mean, closed_var, trials));
            report.checks.push_back(variance_check("R_hat_b", closed_var, est.sample_variance()));
            break;
        }
        case FormulaId::eq14: {
            if (!(params.s >= 1.0)) throw std::invalid_argument("mc-verify: s must be >= 1");
            const auto [u1, u2] = make_test_vectors(params.f, root);
            const double truth = dot(u1, u2);
            SeqRng seeds(root.split(4));
            RunningMoments est;
            for (uint64_t t = 0; t < trials; ++t) {
                const ProjectionSpec spec{params.k, params.s, seeds.next()};
                est.add(rp_estimate_inner(rp_project(u1, spec), rp_project(u2, spec)));
            }
            const double closed_var = rp_variance(u1, u2, params.s, params.k);
            report.checks.push_back(mean_check("a_hat_rp", truth, est.mean, closed_var, trials));
            report.checks.push_back(variance_check("a_hat_rp", closed_var, est.sample_variance()));
            break;
        }
        case FormulaId::eq18: {
            if (!(params.s >= 1.0)) throw std::invalid_argument("mc-verify: s must be >= 1");
            const auto [u1, u2] = make_test_vectors(params.f, root);
            const double truth = dot(u1, u2);
            SeqRng seeds(root.split(5));
            RunningMoments est;
            for (uint64_t t = 0; t < trials; ++t) {
                BucketHashSpec spec;
                spec.k = params.k;
                spec.bucket_seed = seeds.next();
                spec.sign_seed = seeds.next();
                spec.s = params.s;
                est.add(vw_estimate_inner(vw_hash(u1, spec), vw_hash(u2, spec)));
            }
            const double closed_var = vw_variance(u1, u2, params.s, params.k);
            report.checks.push_back(mean_check("a_hat_vw", truth, est.mean, closed_var, trials));
            report.checks.push_back(variance_check("a_hat_vw", closed_var, est.sample_variance()));

            // At s = 1 the two variance formulas coincide identically.
            McCheck same;
            same.name = "vw_variance(s=1) == rp_variance(s=1) (exact)";
            same.expected = rp_variance(u1, u2, 1.0, params.k);
            same.observed = vw_variance(u1, u2, 1.0, params.k);
            same.error = std::abs(same.observed - same.expected);
            same.tolerance = 0.0;
            same.pass = same.error == 0.0;
            report.checks.push_back(same);
            break;
        }
    }
    return report;
}

const char* method_name(Method m) {
    switch (m) {
        case Method::bbit: return "bbit";
        case Method::vw: return "vw";
        case Method::rp: return "rp";
        case Method::raw: return "raw";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "bbit") return Method::bbit;
    if (name == "vw") return Method::vw;
    if (name == "rp") return Method::rp;
    if (name == "raw") return Method::raw;
    throw std::invalid_argument("unknown method: " + name + " (want bbit, vw, rp, or raw)");
}

uint64_t bits_per_example(Method m, uint32_t k, uint8_t b, uint32_t bits_per_bucket) {
    switch (m) {
        case Method::bbit: return static_cast<uint64_t>(b) * k;
        case Method::vw:
        case Method::rp: return static_cast<uint64_t>(bits_per_bucket) * k;
        case Method::raw: return 0; // un-hashed reference, outside the storage comparison
    }
    return 0;
}

namespace {

void parallel_tasks(size_t count, uint32_t threads, const std::function<void(size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const size_t nworkers = std::min<size_t>(threads, count);
    pool.reserve(nworkers);
    for (size_t w = 0; w < nworkers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct CellResult {
    size_t row = 0;
    double accuracy = 0;
    double seconds = 0;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

std::vector<GridRow> run_grid(const std::vector<LabeledSet>& data, const GridConfig& cfg) {
    if (data.size() < 2) throw std::invalid_argument("run_grid: need at least 2 records");
    if (cfg.methods.empty() || cfg.k_list.empty() || cfg.b_list.empty() || cfg.c_list.empty()) {
        throw std::invalid_argument("run_grid: methods, k, b, and C lists must be nonempty");
    }
    if (!(cfg.split > 0.0 && cfg.split < 1.0)) {
        throw std::invalid_argument("run_grid: split must be in (0, 1)");
    }
    if (cfg.trials < 1) throw std::invalid_argument("run_grid: trials must be >= 1");
    if (cfg.epochs < 1) throw std::invalid_argument("run_grid: epochs must be >= 1");
    for (uint32_t k : cfg.k_list) {
        if (k < 1) throw std::invalid_argument("run_grid: k must be >= 1");
    }
    for (uint8_t b : cfg.b_list) {
        if (b < 1 || b > 16) throw std::invalid_argument("run_grid: b must be in [1, 16]");
    }
    for (double C : cfg.c_list) {
        if (!(C > 0.0)) throw std::invalid_argument("run_grid: C must be positive");
    }
    const uint64_t D = data[0].set.universe_size;
    for (const LabeledSet& r : data) {
        if (r.set.universe_size != D) {
            throw std::invalid_argument("run_grid: records disagree on the universe size");
        }
    }
    const size_t n = data.size();
    const size_t train_n = static_cast<size_t>(cfg.split * static_cast<double>(n));
    if (train_n < 1 || train_n >= n) {
        throw std::invalid_argument("run_grid: degenerate split (empty train or test side)");
    }
    const bool needs_sketch =
        std::find(cfg.methods.begin(), cfg.methods.end(), Method::bbit) != cfg.methods.end();
    if (needs_sketch) {
        for (size_t i = 0; i < n; ++i) {
            if (data[i].set.empty()) {
                throw std::invalid_argument("run_grid: record " + std::to_string(i) +
                                            " is empty and cannot be sketched");
            }
        }
    }

    // Row layout, in deterministic grid order. Methods without a bit depth
    // collapse the b axis; raw collapses k as well.
    std::vector<GridRow> rows;
    struct MethodRows {
        Method method = Method::bbit;
        size_t row_begin = 0;
        size_t row_count = 0;
    };
    std::vector<MethodRows> method_rows;
    for (Method m : cfg.methods) {
        MethodRows mr;
        mr.method = m;
        mr.row_begin = rows.size();
        auto push_row = [&rows, &cfg, m](uint32_t k, uint8_t b, double C) {
            GridRow row;
            row.method = m;
            row.k = k;
            row.b = b;
            row.C = C;
            row.bits_per_example_32 = bits_per_example(m, k, b, 32);
            row.bits_per_example_16 = bits_per_example(m, k, b, 16);
            rows.push_back(row);
        };
        switch (m) {
            case Method::bbit:
                for (uint32_t k : cfg.k_list)
                    for (uint8_t b : cfg.b_list)
                        for (double C : cfg.c_list) push_row(k, b, C);
                break;
            case Method::vw:
            case Method::rp:
                for (uint32_t k : cfg.k_list)
                    for (double C : cfg.c_list) push_row(k, 0, C);
                break;
            case Method::raw:
                for (double C : cfg.c_list) push_row(0, 0, C);
                break;
        }
        mr.row_count = rows.size() - mr.row_begin;
        method_rows.push_back(mr);
    }

    const uint32_t kmax = *std::max_element(cfg.k_list.begin(), cfg.k_list.end());
    const SplitRng root(cfg.seed);

    // One task = one (method, trial): encodes features once, then sweeps
    // its rows. Results are merged in task order afterwards, so the thread
    // count never changes the output.
    const size_t task_count = method_rows.size() * cfg.trials;
    std::vector<std::vector<CellResult>> task_results(task_count);

    auto run_task = [&](size_t task_id) {
        const MethodRows& mr = method_rows[task_id / cfg.trials];
        const uint32_t trial = static_cast<uint32_t>(task_id % cfg.trials);
        const SplitRng trial_rng = root.split(trial);

        // Train/test split for this trial.
        std::vector<size_t> perm(n);
        std::iota(perm.begin(), perm.end(), size_t{0});
        SeqRng shuffle(trial_rng.split(0));
        for (size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[shuffle.next_below(i + 1)]);

        std::vector<CellResult>& out = task_results[task_id];

        auto sweep_c = [&](std::vector<LabeledExample>& train_ex, std::vector<LabeledExample>& test_ex,
                           uint64_t dim, size_t row_begin) {
            for (size_t ci = 0; ci < cfg.c_list.size(); ++ci) {
                const size_t row = row_begin + ci;
                TrainOptions opts;
                opts.epochs = cfg.epochs;
                opts.seed = trial_rng.split(4).at(row);
                const auto start = std::chrono::steady_clock::now();
                const LinearModel model = train(train_ex, dim, cfg.c_list[ci], cfg.loss, opts);
                const double secs = seconds_since(start);
                out.push_back({row, evaluate_accuracy(model, test_ex), secs});
            }
        };

        auto assemble = [&](std::vector<SparseRealVector>& feats, uint64_t dim, size_t row_begin) {
            std::vector<LabeledExample> train_ex, test_ex;
            train_ex.reserve(train_n);
            test_ex.reserve(n - train_n);
            for (size_t pos = 0; pos < n; ++pos) {
                const size_t i = perm[pos];
                LabeledExample ex{std::move(feats[i]), data[i].label};
                (pos < train_n ? train_ex : test_ex).push_back(std::move(ex));
            }
            sweep_c(train_ex, test_ex, dim, row_begin);
        };

        switch (mr.method) {
            case Method::bbit: {
                const TwoUniversalHashFamily family =
                    build_2u_family(kmax, D, trial_rng.split(1).key());
                std::vector<MinwiseSketch> minw(n);
                for (size_t i = 0; i < n; ++i) minw[i] = minwise_sketch(data[i].set, family);
                size_t row = mr.row_begin;
                for (uint32_t k : cfg.k_list) {
                    for (uint8_t b : cfg.b_list) {
                        const uint16_t mask = static_cast<uint16_t>((uint32_t{1} << b) - 1);
                        std::vector<SparseRealVector> feats(n);
                        uint64_t dim = 0;
                        for (size_t i = 0; i < n; ++i) {
                            BBitSketch s;
                            s.bits = b;
                            s.values.resize(k);
                            for (uint32_t j = 0; j < k; ++j) {
                                s.values[j] = static_cast<uint16_t>(minw[i].values[j]) & mask;
                            }
                            ExpandedVector e = expand_bbit(s);
                            dim = e.dim;
                            feats[i] = to_sparse_real(e);
                        }
                        assemble(feats, dim, row);
                        row += cfg.c_list.size();
                    }
                }
                break;
            }
            case Method::vw: {
                std::vector<SparseRealVector> raw_real(n);
                for (size_t i = 0; i < n; ++i) raw_real[i] = SparseRealVector::from_set(data[i].set);
                size_t row = mr.row_begin;
                for (uint32_t k : cfg.k_list) {
                    const SplitRng kseed = trial_rng.split(2).split(k);
                    BucketHashSpec spec;
                    spec.k = k;
                    spec.bucket_seed = kseed.at(0);
                    spec.sign_seed = kseed.at(1);
                    spec.s = 1.0;
                    std::vector<SparseRealVector> feats(n);
                    for (size_t i = 0; i < n; ++i) {
                        const std::vector<double> g = vw_hash(raw_real[i], spec);
                        std::vector<std::pair<uint64_t, double>> entries;
                        for (uint32_t j = 0; j < k; ++j) {
                            if (g[j] != 0.0) entries.emplace_back(j, g[j]);
                        }
                        feats[i] = SparseRealVector::from_entries(std::move(entries), k);
                    }
                    assemble(feats, k, row);
                    row += cfg.c_list.size();
                }
                break;
            }
            case Method::rp: {
                std::vector<SparseRealVector> raw_real(n);
                for (size_t i = 0; i < n; ++i) raw_real[i] = SparseRealVector::from_set(data[i].set);
                size_t row = mr.row_begin;
                for (uint32_t k : cfg.k_list) {
                    const ProjectionSpec spec{k, cfg.rp_s, trial_rng.split(3).split(k).key()};
                    std::vector<SparseRealVector> feats(n);
                    for (size_t i = 0; i < n; ++i) {
                        const std::vector<double> v = rp_project(raw_real[i], spec);
                        std::vector<std::pair<uint64_t, double>> entries;
                        for (uint32_t j = 0; j < k; ++j) {
                            if (v[j] != 0.0) entries.emplace_back(j, v[j]);
                        }
                        feats[i] = SparseRealVector::from_entries(std::move(entries), k);
                    }
                    assemble(feats, k, row);
                    row += cfg.c_list.size();
                }
                break;
            }
            case Method::raw: {
                std::vector<SparseRealVector> feats(n);
                for (size_t i = 0; i < n; ++i) feats[i] = SparseRealVector::from_set(data[i].set);
                assemble(feats, D, mr.row_begin);
                break;
            }
        }
    };

    parallel_tasks(task_count, cfg.threads, run_task);

    for (size_t task_id = 0; task_id < task_count; ++task_id) {
        for (const CellResult& cr : task_results[task_id]) {
            rows[cr.row].accuracy += cr.accuracy;
            rows[cr.row].train_seconds += cr.seconds;
        }
    }
    for (GridRow& row : rows) {
        row.accuracy /= cfg.trials;
        row.train_seconds /= cfg.trials;
    }
    return rows;
}

} // namespace hashlearn
