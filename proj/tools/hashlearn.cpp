// Command-line front end: sketching, expansion, training, evaluation, and
// the Monte Carlo / storage-accuracy experiments, glued together from the
// library pieces. Exit codes: 0 success, 1 validation error, 2 IO error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hashlearn/dataset.hpp"
#include "hashlearn/errors.hpp"
#include "hashlearn/expansion.hpp"
#include "hashlearn/experiment.hpp"
#include "hashlearn/learner.hpp"
#include "hashlearn/minwise.hpp"
#include "hashlearn/sketch_file.hpp"
#include "hashlearn/textio.hpp"

namespace {

using namespace hashlearn;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

uint32_t default_threads() {
    const char* env = std::getenv("HASHLEARN_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == nullptr || *end != '\0' || v < 1 || v > 1024) {
        throw std::invalid_argument("HASHLEARN_THREADS must be an integer in [1, 1024], got '" +
                                    std::string(env) + "'");
    }
    return static_cast<uint32_t>(v);
}

void print_stats(std::ostream& out, const DatasetStats& stats) {
    out << "n=" << stats.n << " universe=" << stats.universe_size
        << " nnz_median=" << format_double(stats.nnz_median)
        << " nnz_mean=" << format_double(stats.nnz_mean) << "\n";
}

// ---- synth ----

struct SynthArgs {
    uint64_t n = 0;
    uint64_t universe = 0;
    uint64_t f_mean = 0;
    double class_sep = 0.5;
    uint64_t seed = 0;
    std::string out;
};

void cmd_synth(const SynthArgs& a) {
    const auto records = generate_synthetic(a.n, a.universe, a.f_mean, a.class_sep, a.seed);
    write_sparse_text(a.out, records);
    std::cout << "wrote " << records.size() << " records to " << a.out << "\n";
}

// ---- stats ----

struct StatsArgs {
    std::string input;
    bool zero_as_negative = false;
};

void cmd_stats(const StatsArgs& a) {
    print_stats(std::cout, compute_stats_file(a.input, {a.zero_as_negative}));
}

// ---- sketch ----

struct SketchArgs {
    std::string input;
    uint32_t k = 0;
    uint32_t b = 0;
    uint64_t seed = 0;
    uint64_t universe = 0; // 0 = max index + 1 from the data
    bool combine = false;
    uint64_t triples_mod = 30;
    bool zero_as_negative = false;
    std::string out;
};

void cmd_sketch(const SketchArgs& a) {
    const auto t_load = std::chrono::steady_clock::now();
    BinaryDataset data = load_binary_dataset(a.input, {a.zero_as_negative}, a.universe);
    const double load_seconds = seconds_since(t_load);

    const auto t_pre = std::chrono::steady_clock::now();
    if (a.combine) {
        for (LabeledSet& rec : data.records) rec.set = expand_combinations(rec.set, a.triples_mod);
    }
    const uint64_t D = data.records.empty() ? 0 : data.records[0].set.universe_size;
    const TwoUniversalHashFamily family = build_2u_family(a.k, D, a.seed);
    const uint8_t bits = static_cast<uint8_t>(a.b);
    SketchFileWriter writer(a.out, D, a.k, bits, a.seed);
    for (size_t i = 0; i < data.records.size(); ++i) {
        if (data.records[i].set.empty()) {
            throw std::invalid_argument("record " + std::to_string(i + 1) +
                                        " is empty and cannot be sketched");
        }
        writer.append(truncate_to_b_bits(minwise_sketch(data.records[i].set, family), bits),
                      data.records[i].label);
    }
    writer.finalize();
    const double preprocess_seconds = seconds_since(t_pre);

    print_stats(std::cout, data.stats);
    if (a.combine) std::cout << "combined_universe=" << D << "\n";
    std::cout << "load_seconds=" << format_double(load_seconds) << "\n";
    std::cout << "preprocess_seconds=" << format_double(preprocess_seconds) << "\n";
    std::cout << "wrote " << data.records.size() << " sketches ("
              << sketch_record_bytes(a.k, bits) << " bytes each + " << kSketchHeaderBytes
              << " header + " << data.records.size() << " labels) to " << a.out << "\n";
}

// ---- expand ----

struct ExpandArgs {
    std::string input;
    std::string out;
    uint32_t vw_k = 0; // 0 = plain one-hot expansion
    uint64_t seed = 0;
};

void cmd_expand(const ExpandArgs& a) {
    const SketchFileData data = read_sketch_file(a.input);
    std::vector<LabeledExample> out;
    out.reserve(data.sketches.size());
    for (size_t i = 0; i < data.sketches.size(); ++i) {
        const ExpandedVector e = expand_bbit(data.sketches[i]);
        if (a.vw_k == 0) {
            out.push_back({to_sparse_real(e), data.labels[i]});
        } else {
            BucketHashSpec spec;
            spec.k = a.vw_k;
            spec.bucket_seed = SplitRng(a.seed).at(0);
            spec.sign_seed = SplitRng(a.seed).at(1);
            const std::vector<double> g = compress_expanded_with_vw(e, spec);
            std::vector<std::pair<uint64_t, double>> entries;
            for (uint32_t j = 0; j < a.vw_k; ++j) {
                if (g[j] != 0.0) entries.emplace_back(j, g[j]);
            }
            out.push_back({SparseRealVector::from_entries(std::move(entries), a.vw_k),
                           data.labels[i]});
        }
    }
    write_sparse_text(a.out, out);
    std::cout << "expanded " << out.size() << " records (k=" << data.header.k
              << ", b=" << static_cast<int>(data.header.bits);
    if (a.vw_k != 0) std::cout << ", compressed to " << a.vw_k << " buckets";
    std::cout << ") to " << a.out << "\n";
}

// ---- train ----

struct TrainArgs {
    std::string input;
    std::string loss = "hinge";
    double C = 1.0;
    uint32_t epochs = 50;
    uint64_t seed = 0;
    uint64_t dim = 0; // 0 = max index + 1 from the data
    bool zero_as_negative = false;
    std::string model_out;
};

void cmd_train(const TrainArgs& a) {
    const RealDataset data = load_real_dataset(a.input, {a.zero_as_negative}, a.dim);
    const LossKind loss = loss_from_name(a.loss);
    TrainOptions opts;
    opts.epochs = a.epochs;
    opts.seed = a.seed;
    const auto t0 = std::chrono::steady_clock::now();
    const LinearModel model = train(data.examples, data.stats.universe_size, a.C, loss, opts);
    const double secs = seconds_since(t0);
    save_model(model, a.model_out);
    std::cout << "n=" << data.examples.size() << " dim=" << data.stats.universe_size
              << " objective=" << format_double(objective(model, data.examples))
              << " train_accuracy=" << format_double(evaluate_accuracy(model, data.examples))
              << " train_seconds=" << format_double(secs) << "\n";
    std::cout << "wrote model to " << a.model_out << "\n";
}

// ---- eval ----

struct EvalArgs {
    std::string model;
    std::string input;
    bool zero_as_negative = false;
};

void cmd_eval(const EvalArgs& a) {
    const LinearModel model = load_model(a.model);
    const RealDataset data = load_real_dataset(a.input, {a.zero_as_negative}, model.dim());
    std::cout << "n=" << data.examples.size()
              << " accuracy=" << format_double(evaluate_accuracy(model, data.examples))
              << " objective=" << format_double(objective(model, data.examples)) << "\n";
}

// ---- mc-verify ----

struct McArgs {
    std::string formula;
    McParams params;
    uint32_t b = 1;
    uint64_t trials = 10000;
    uint64_t seed = 0;
};

int cmd_mc_verify(const McArgs& a) {
    const FormulaId id = formula_from_name(a.formula);
    McParams params = a.params;
    params.b = static_cast<uint8_t>(a.b);
    std::cout << "formula " << formula_name(id) << " (trials=" << a.trials << ", seed=" << a.seed
              << ")\n";
    if (id == FormulaId::eq2 || id == FormulaId::thm1 || id == FormulaId::eq8) {
        const PairGeometry g =
            make_pair_geometry(params.universe_size, params.r1, params.r2, params.resemblance);
        std::cout << "geometry: D=" << g.universe_size << " f1=" << g.f1 << " f2=" << g.f2
                  << " a=" << g.a << " realized_R=" << format_double(g.resemblance()) << "\n";
    }
    const McReport report = run_mc_verify(id, params, a.trials, a.seed);
    for (const McCheck& c : report.checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
                  << ": expected=" << format_double(c.expected)
                  << " observed=" << format_double(c.observed) << " err=" << format_double(c.error)
                  << " tol=" << format_double(c.tolerance) << "\n";
    }
    std::cout << "result: " << (report.all_pass() ? "PASS" : "FAIL") << "\n";
    return report.all_pass() ? 0 : 1;
}

// ---- compare ----

struct CompareArgs {
    std::string input;
    uint64_t synth_n = 0;
    uint64_t universe = 1u << 20;
    uint64_t f_mean = 50;
    double class_sep = 0.5;
    std::vector<std::string> methods{"bbit"};
    std::vector<uint32_t> k_list{64};
    std::vector<uint32_t> b_list{8};
    std::vector<double> c_list = default_c_grid();
    std::string loss = "hinge";
    double rp_s = 1.0;
    double split = 0.8;
    uint32_t trials = 1;
    uint32_t epochs = 20;
    uint64_t seed = 0;
    uint32_t threads = 1;
    bool zero_as_negative = false;
    std::string out; // empty = stdout
    std::string config_path;
};

template <class T>
std::string join_list(const std::vector<T>& xs) {
    std::ostringstream s;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) s << ',';
        if constexpr (std::is_floating_point_v<T>) {
            s << format_double(xs[i]);
        } else {
            s << xs[i];
        }
    }
    return s.str();
}

void cmd_compare(const CompareArgs& a) {
    if (a.input.empty() == (a.synth_n == 0)) {
        throw std::invalid_argument("compare: give exactly one of --input or --synth-n");
    }
    std::vector<LabeledSet> records;
    std::string source;
    if (!a.input.empty()) {
        BinaryDataset data = load_binary_dataset(a.input, {a.zero_as_negative});
        records = std::move(data.records);
        source = "input=" + a.input;
    } else {
        records = generate_synthetic(a.synth_n, a.universe, a.f_mean, a.class_sep, a.seed);
        source = "synth-n=" + std::to_string(a.synth_n) + " universe=" + std::to_string(a.universe) +
                 " f-mean=" + std::to_string(a.f_mean) + " class-sep=" + format_double(a.class_sep);
    }

    GridConfig cfg;
    cfg.methods.clear();
    for (const std::string& m : a.methods) cfg.methods.push_back(method_from_name(m));
    cfg.k_list = a.k_list;
    cfg.b_list.clear();
    for (uint32_t b : a.b_list) {
        if (b < 1 || b > 16) throw std::invalid_argument("compare: b must be in [1, 16]");
        cfg.b_list.push_back(static_cast<uint8_t>(b));
    }
    cfg.c_list = a.c_list;
    cfg.loss = loss_from_name(a.loss);
    cfg.rp_s = a.rp_s;
    cfg.split = a.split;
    cfg.trials = a.trials;
    cfg.epochs = a.epochs;
    cfg.seed = a.seed;
    cfg.threads = a.threads;

    const std::vector<GridRow> rows = run_grid(records, cfg);

    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out);
        if (!file) throw io_error("cannot open for writing: " + a.out);
    }
    std::ostream& out = a.out.empty() ? std::cout : file;

    out << "#hashlearn-csv-v1\n";
    if (!a.config_path.empty()) out << "#config-file: " << a.config_path << "\n";
    out << "#cmd: compare " << source << " methods=" << join_list(a.methods)
        << " k-list=" << join_list(a.k_list) << " b-list=" << join_list(a.b_list)
        << " c-list=" << join_list(a.c_list) << " loss=" << a.loss
        << " rp-s=" << format_double(a.rp_s) << " split=" << format_double(a.split)
        << " trials=" << a.trials << " epochs=" << a.epochs << " seed=" << a.seed << "\n";
    out << "method,k,b,C,bits_per_example_32,bits_per_example_16,accuracy,train_seconds\n";
    for (const GridRow& row : rows) {
        out << method_name(row.method) << ',' << row.k << ',' << static_cast<int>(row.b) << ','
            << format_double(row.C) << ',' << row.bits_per_example_32 << ','
            << row.bits_per_example_16 << ',' << format_double(row.accuracy) << ','
            << format_double(row.train_seconds) << "\n";
    }
    out.flush();
    if (!out) throw io_error("write failure on " + (a.out.empty() ? std::string("stdout") : a.out));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sketching-for-learning toolkit: b-bit minwise hashing, signed bucket hashing, "
                 "random projections, and a linear-classifier pipeline over them"};
    app.require_subcommand(1);
    auto* config_opt = app.set_config("--config", "",
                                      "read option defaults from an INI file (flags win over file)");

    uint32_t threads = 0; // resolved after parse: flag > env > 1

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate a planted-prototype synthetic dataset");
    synth_cmd->add_option("-n,--n", synth.n, "number of records")->required()
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--universe", synth.universe, "feature universe size D")->required()
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--f-mean", synth.f_mean, "elements per record")->required()
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--class-sep", synth.class_sep,
                          "fraction of the class prototype each record keeps (0..1)")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed, "RNG seed")->capture_default_str();
    synth_cmd->add_option("-o,--out", synth.out, "output dataset path")->required();

    StatsArgs stats;
    auto* stats_cmd = app.add_subcommand("stats", "print dataset statistics");
    stats_cmd->add_option("-i,--input", stats.input, "sparse text dataset")->required();
    stats_cmd->add_flag("--zero-as-negative", stats.zero_as_negative, "accept label 0 as -1");

    SketchArgs sketch;
    auto* sketch_cmd = app.add_subcommand("sketch", "b-bit minwise sketch a dataset into a binary file");
    sketch_cmd->add_option("-i,--input", sketch.input, "sparse text dataset")->required();
    sketch_cmd->add_option("-k,--k", sketch.k, "number of hash functions")->required()
        ->check(CLI::PositiveNumber);
    sketch_cmd->add_option("-b,--b", sketch.b, "bits kept per hash value")->required()
        ->check(CLI::Range(1u, 16u));
    sketch_cmd->add_option("--seed", sketch.seed, "hash family seed")->capture_default_str();
    sketch_cmd->add_option("--universe", sketch.universe,
                           "universe size override (default: max index + 1)")
        ->capture_default_str();
    sketch_cmd->add_flag("--combine", sketch.combine,
                         "expand each record with pairwise (and subsampled 3-way) combinations first");
    sketch_cmd->add_option("--triples-mod", sketch.triples_mod,
                           "keep 3-way combinations whose index is divisible by this (0 = none)")
        ->capture_default_str();
    sketch_cmd->add_flag("--zero-as-negative", sketch.zero_as_negative, "accept label 0 as -1");
    sketch_cmd->add_option("-o,--out", sketch.out, "output sketch file")->required();

    ExpandArgs expand;
    auto* expand_cmd = app.add_subcommand("expand", "expand a sketch file into one-hot text features");
    expand_cmd->add_option("-i,--input", expand.input, "sketch file")->required();
    expand_cmd->add_option("-o,--out", expand.out, "output dataset path")->required();
    expand_cmd->add_option("--vw-k", expand.vw_k,
                           "also compress the expansion to this many signed buckets (0 = off)")
        ->capture_default_str();
    expand_cmd->add_option("--seed", expand.seed, "bucket/sign seed for --vw-k")->capture_default_str();

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "train a linear model on a text dataset");
    train_cmd->add_option("-i,--input", train_args.input, "sparse text dataset")->required();
    train_cmd->add_option("--loss", train_args.loss, "hinge or logistic")->capture_default_str();
    train_cmd->add_option("-C,--C", train_args.C, "penalty parameter")->capture_default_str();
    train_cmd->add_option("--epochs", train_args.epochs, "training epochs")->capture_default_str();
    train_cmd->add_option("--seed", train_args.seed, "shuffling seed")->capture_default_str();
    train_cmd->add_option("--dim", train_args.dim, "feature dim override (default: max index + 1)")
        ->capture_default_str();
    train_cmd->add_flag("--zero-as-negative", train_args.zero_as_negative, "accept label 0 as -1");
    train_cmd->add_option("-o,--model-out", train_args.model_out, "output model path")->required();

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a saved model on a dataset");
    eval_cmd->add_option("-m,--model", eval_args.model, "model file")->required();
    eval_cmd->add_option("-i,--input", eval_args.input, "sparse text dataset")->required();
    eval_cmd->add_flag("--zero-as-negative", eval_args.zero_as_negative, "accept label 0 as -1");

    McArgs mc;
    auto* mc_cmd = app.add_subcommand("mc-verify",
                                      "check a closed-form mean/variance against Monte Carlo");
    mc_cmd->add_option("--formula", mc.formula, "eq2, thm1, eq8, eq14, or eq18")->required();
    mc_cmd->add_option("--universe", mc.params.universe_size, "universe size D")->capture_default_str();
    mc_cmd->add_option("--r1", mc.params.r1, "sparsity of set 1")->capture_default_str();
    mc_cmd->add_option("--r2", mc.params.r2, "sparsity of set 2")->capture_default_str();
    mc_cmd->add_option("-R,--resemblance", mc.params.resemblance, "target resemblance")
        ->capture_default_str();
    mc_cmd->add_option("-b,--b", mc.b, "bits per hash value (thm1/eq8)")->check(CLI::Range(1u, 16u))
        ->capture_default_str();
    mc_cmd->add_option("-k,--k", mc.params.k, "hashes per trial / projection dim")
        ->check(CLI::PositiveNumber)->capture_default_str();
    mc_cmd->add_option("-s,--s", mc.params.s, "entry fourth moment (eq14/eq18)")->capture_default_str();
    mc_cmd->add_option("--f", mc.params.f, "support size of the test vectors (eq14/eq18)")
        ->check(CLI::PositiveNumber)->capture_default_str();
    mc_cmd->add_option("--trials", mc.trials, "Monte Carlo trials (>= 1000)")->capture_default_str();
    mc_cmd->add_option("--seed", mc.seed, "RNG seed")->capture_default_str();

    CompareArgs cmp;
    auto* cmp_cmd = app.add_subcommand(
        "compare", "storage-vs-accuracy grid: sweep methods x k x b x C with train/test splits");
    cmp_cmd->add_option("-i,--input", cmp.input, "sparse text dataset (alternative to --synth-n)");
    cmp_cmd->add_option("--synth-n", cmp.synth_n, "generate a synthetic dataset of this size instead");
    cmp_cmd->add_option("--universe", cmp.universe, "synthetic universe size")->capture_default_str();
    cmp_cmd->add_option("--f-mean", cmp.f_mean, "synthetic elements per record")->capture_default_str();
    cmp_cmd->add_option("--class-sep", cmp.class_sep, "synthetic class separation")
        ->capture_default_str();
    cmp_cmd->add_option("--methods", cmp.methods, "subset of bbit,vw,rp,raw")->delimiter(',')
        ->capture_default_str();
    cmp_cmd->add_option("--k-list", cmp.k_list, "hash counts / bucket counts")->delimiter(',')
        ->capture_default_str();
    cmp_cmd->add_option("--b-list", cmp.b_list, "bit depths (bbit only)")->delimiter(',')
        ->capture_default_str();
    cmp_cmd->add_option("--c-list", cmp.c_list, "penalty parameters")->delimiter(',')
        ->capture_default_str();
    cmp_cmd->add_option("--loss", cmp.loss, "hinge or logistic")->capture_default_str();
    cmp_cmd->add_option("--rp-s", cmp.rp_s, "projection sparsity parameter s")->capture_default_str();
    cmp_cmd->add_option("--split", cmp.split, "train fraction")->capture_default_str();
    cmp_cmd->add_option("--trials", cmp.trials, "independent split/hash trials to average")
        ->check(CLI::PositiveNumber)->capture_default_str();
    cmp_cmd->add_option("--epochs", cmp.epochs, "training epochs")->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmp_cmd->add_option("--seed", cmp.seed, "master seed")->capture_default_str();
    cmp_cmd->add_flag("--zero-as-negative", cmp.zero_as_negative, "accept label 0 as -1");
    cmp_cmd->add_option("-o,--out", cmp.out, "CSV output path (default: stdout)");

    auto* threads_opt =
        app.add_option("--threads", threads,
                       "worker threads for grid cells (default: HASHLEARN_THREADS or 1)");

    // Let `hashlearn <cmd> --threads N` reach the app-level option.
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (threads_opt->count() == 0) threads = default_threads();
        if (threads < 1) throw std::invalid_argument("--threads must be >= 1");

        if (synth_cmd->parsed()) {
            cmd_synth(synth);
        } else if (stats_cmd->parsed()) {
            cmd_stats(stats);
        } else if (sketch_cmd->parsed()) {
            cmd_sketch(sketch);
        } else if (expand_cmd->parsed()) {
            cmd_expand(expand);
        } else if (train_cmd->parsed()) {
            cmd_train(train_args);
        } else if (eval_cmd->parsed()) {
            cmd_eval(eval_args);
        } else if (mc_cmd->parsed()) {
            return cmd_mc_verify(mc);
        } else if (cmp_cmd->parsed()) {
            cmp.threads = threads;
            cmp.config_path = config_opt->count() ? config_opt->as<std::string>() : "";
            cmd_compare(cmp);
        }
        return 0;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
