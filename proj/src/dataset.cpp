#include "hashlearn/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "hashlearn/errors.hpp"
#include "hashlearn/rng.hpp"
#include "hashlearn/textio.hpp"

namespace hashlearn {

SparseTextReader::SparseTextReader(const std::string& path, ReaderOptions opts)
    : in_(path), path_(path), opts_(opts) {
    if (!in_) throw io_error("cannot open dataset: " + path);
}

bool SparseTextReader::next(ParsedRecord& out) {
    if (!std::getline(in_, buf_)) {
        if (in_.bad()) throw io_error("read failure on " + path_);
        return false;
    }
    ++line_;
    if (!buf_.empty() && buf_.back() == '\r') buf_.pop_back();

    const char* p = buf_.data();
    const char* end = p + buf_.size();
    auto skip_ws = [&p, end] {
        while (p < end && (*p == ' ' || *p == '\t')) ++p;
    };

    skip_ws();
    if (p == end) throw parse_error("blank line", line_);
    if (*p == '#') throw parse_error("comment lines are not supported", line_);

    const char* tok = p;
    while (p < end && *p != ' ' && *p != '\t') ++p;
    const std::string label(tok, p);
    if (label == "+1" || label == "1") {
        out.label = 1;
    } else if (label == "-1") {
        out.label = -1;
    } else if (label == "0") {
        if (!opts_.zero_label_as_negative) {
            throw parse_error("label '0' is only accepted when mapped to -1 (zero_label_as_negative)",
                              line_);
        }
        out.label = -1;
    } else {
        throw parse_error("bad label '" + label + "' (want +1, 1, -1, or 0)", line_);
    }

    out.entries.clear();
    uint64_t prev = 0; // previous 1-based index
    for (;;) {
        skip_ws();
        if (p == end) break;
        uint64_t idx = 0;
        const auto ir = std::from_chars(p, end, idx);
        if (ir.ec != std::errc() || ir.ptr == p) throw parse_error("bad feature index", line_);
        if (ir.ptr == end || *ir.ptr != ':') throw parse_error("expected ':' after feature index", line_);
        if (idx == 0) throw parse_error("feature indices are 1-based", line_);
        if (idx <= prev) throw parse_error("feature indices must be strictly ascending", line_);
        p = ir.ptr + 1;
        double val = 0;
        const auto vr = std::from_chars(p, end, val);
        if (vr.ec != std::errc() || vr.ptr == p) throw parse_error("bad feature value", line_);
        if (vr.ptr != end && *vr.ptr != ' ' && *vr.ptr != '\t') {
            throw parse_error("trailing characters after feature value", line_);
        }
        if (val == 0.0 || !std::isfinite(val)) {
            throw parse_error("feature value must be nonzero and finite", line_);
        }
        p = vr.ptr;
        out.entries.emplace_back(idx - 1, val);
        prev = idx;
    }
    return true;
}

namespace {

/// One-pass accumulator; the nnz histogram keeps median memory bounded by
/// the largest record instead of the record count.
struct StatsAcc {
    uint64_t n = 0;
    uint64_t universe = 0;
    double nnz_sum = 0;
    std::vector<uint64_t> hist;

    void add(const ParsedRecord& rec) {
        ++n;
        const size_t f = rec.entries.size();
        if (f >= hist.size()) hist.resize(f + 1, 0);
        ++hist[f];
        nnz_sum += static_cast<double>(f);
        if (!rec.entries.empty()) universe = std::max(universe, rec.entries.back().first + 1);
    }

    DatasetStats finish(const std::string& path) const {
        if (n == 0) throw std::invalid_argument("empty dataset: " + path);
        auto count_at = [this](uint64_t target) { // 0-based order statistic
            uint64_t seen = 0;
            for (size_t f = 0; f < hist.size(); ++f) {
                seen += hist[f];
                if (seen > target) return static_cast<uint64_t>(f);
            }
            return uint64_t{0}; // unreachable: hist sums to n > target
        };
        DatasetStats stats;
        stats.n = n;
        stats.universe_size = universe;
        stats.nnz_median =
            (static_cast<double>(count_at((n - 1) / 2)) + static_cast<double>(count_at(n / 2))) / 2.0;
        stats.nnz_mean = nnz_sum / static_cast<double>(n);
        return stats;
    }
};

uint64_t resolve_universe(const DatasetStats& stats, uint64_t override_value, const std::string& path) {
    if (override_value == 0) return stats.universe_size;
    if (override_value < stats.universe_size) {
        throw std::invalid_argument("universe override " + std::to_string(override_value) +
                                    " is smaller than max feature index + 1 = " +
                                    std::to_string(stats.universe_size) + " in " + path);
    }
    return override_value;
}

} // namespace

DatasetStats compute_stats(SparseTextReader& reader) {
    StatsAcc acc;
    ParsedRecord rec;
    while (reader.next(rec)) acc.add(rec);
    return acc.finish(reader.path());
}

DatasetStats compute_stats_file(const std::string& path, ReaderOptions opts) {
    SparseTextReader reader(path, opts);
    return compute_stats(reader);
}

BinaryDataset load_binary_dataset(const std::string& path, ReaderOptions opts,
                                  uint64_t universe_override) {
    SparseTextReader reader(path, opts);
    StatsAcc acc;
    ParsedRecord rec;
    std::vector<ParsedRecord> parsed;
    while (reader.next(rec)) {
        acc.add(rec);
        parsed.push_back(rec);
    }
    BinaryDataset out;
    out.stats = acc.finish(path);
    const uint64_t D = resolve_universe(out.stats, universe_override, path);
    out.stats.universe_size = D;
    out.records.reserve(parsed.size());
    for (ParsedRecord& r : parsed) {
        std::vector<uint64_t> indices;
        indices.reserve(r.entries.size());
        for (const auto& [idx, val] : r.entries) indices.push_back(idx); // any nonzero value counts
        out.records.push_back({SparseBinarySet::from_indices(std::move(indices), D), r.label});
    }
    return out;
}

RealDataset load_real_dataset(const std::string& path, ReaderOptions opts,
                              uint64_t universe_override) {
    SparseTextReader reader(path, opts);
    StatsAcc acc;
    ParsedRecord rec;
    std::vector<ParsedRecord> parsed;
    while (reader.next(rec)) {
        acc.add(rec);
        parsed.push_back(std::move(rec));
    }
    RealDataset out;
    out.stats = acc.finish(path);
    const uint64_t D = resolve_universe(out.stats, universe_override, path);
    out.stats.universe_size = D;
    out.examples.reserve(parsed.size());
    for (ParsedRecord& r : parsed) {
        out.examples.push_back({SparseRealVector::from_entries(std::move(r.entries), D), r.label});
    }
    return out;
}

namespace {

template <class WriteEntries>
void write_lines(const std::string& path, size_t count, const WriteEntries& body) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open for writing: " + path);
    for (size_t i = 0; i < count; ++i) body(out, i);
    out.flush();
    if (!out) throw io_error("write failure on " + path);
}

} // namespace

void write_sparse_text(const std::string& path, const std::vector<LabeledExample>& examples) {
    write_lines(path, examples.size(), [&examples](std::ofstream& out, size_t i) {
        out << (examples[i].label > 0 ? "+1" : "-1");
        for (const auto& [idx, val] : examples[i].features.entries) {
            out << ' ' << (idx + 1) << ':' << format_double(val);
        }
        out << '\n';
    });
}

void write_sparse_text(const std::string& path, const std::vector<LabeledSet>& records) {
    write_lines(path, records.size(), [&records](std::ofstream& out, size_t i) {
        out << (records[i].label > 0 ? "+1" : "-1");
        for (uint64_t idx : records[i].set.indices) out << ' ' << (idx + 1) << ":1";
        out << '\n';
    });
}

SparseBinarySet expand_combinations(const SparseBinarySet& s, uint64_t triples_mod) {
    const uint64_t D = s.universe_size;
    const bool with_triples = triples_mod != 0;
    unsigned __int128 total = static_cast<unsigned __int128>(D) + static_cast<unsigned __int128>(D) * D;
    if (with_triples) total += static_cast<unsigned __int128>(D) * D * D;
    if (total > std::numeric_limits<uint64_t>::max()) {
        throw std::invalid_argument("expand_combinations: combined index space overflows 64 bits at D = " +
                                    std::to_string(D));
    }
    const uint64_t pair_base = D;
    const uint64_t triple_base = D + D * D;
    const std::vector<uint64_t>& ix = s.indices;

    // Since ix is ascending and every j-part is < D, i*D + j is ascending
    // in (i, j) lexicographic order: each block comes out already sorted,
    // and the block bases keep the concatenation sorted. from_indices
    // re-validates that.
    std::vector<uint64_t> out(ix);
    for (size_t i = 0; i < ix.size(); ++i) {
        for (size_t j = i + 1; j < ix.size(); ++j) {
            out.push_back(pair_base + ix[i] * D + ix[j]);
        }
    }
    if (with_triples) {
        for (size_t i = 0; i < ix.size(); ++i) {
            for (size_t j = i + 1; j < ix.size(); ++j) {
                const uint64_t pair_part = (ix[i] * D + ix[j]) * D;
                for (size_t l = j + 1; l < ix.size(); ++l) {
                    const uint64_t t3 = pair_part + ix[l];
                    if (t3 % triples_mod == 0) out.push_back(triple_base + t3);
                }
            }
        }
    }
    return SparseBinarySet::from_indices(std::move(out), static_cast<uint64_t>(total));
}

namespace {

/// f distinct draws from [0, D), sorted. Rejection for sparse demands, a
/// partial Fisher-Yates over the materialized universe otherwise.
std::vector<uint64_t> sample_distinct(uint64_t f, uint64_t D, SeqRng& rng) {
    std::vector<uint64_t> out;
    out.reserve(f);
    if (f <= D / 2) {
        std::unordered_set<uint64_t> seen;
        seen.reserve(f * 2);
        while (out.size() < f) {
            const uint64_t v = rng.next_below(D);
            if (seen.insert(v).second) out.push_back(v);
        }
    } else {
        std::vector<uint64_t> all(D);
        std::iota(all.begin(), all.end(), uint64_t{0});
        for (uint64_t j = 0; j < f; ++j) {
            std::swap(all[j], all[j + rng.next_below(D - j)]);
        }
        out.assign(all.begin(), all.begin() + static_cast<ptrdiff_t>(f));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::vector<LabeledSet> generate_synthetic(uint64_t n, uint64_t universe_size, uint64_t f,
                                           double class_sep, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_synthetic: n must be >= 1");
    if (f < 1 || f > universe_size) {
        throw std::invalid_argument("generate_synthetic: need 1 <= f <= universe, got f = " +
                                    std::to_string(f) + ", universe = " + std::to_string(universe_size));
    }
    if (!(class_sep >= 0.0 && class_sep <= 1.0)) {
        throw std::invalid_argument("generate_synthetic: class_sep must be in [0, 1]");
    }

    const SplitRng root(seed);
    std::array<std::vector<uint64_t>, 2> proto;
    for (int cls = 0; cls < 2; ++cls) {
        SeqRng prng(root.split(static_cast<uint64_t>(cls)));
        proto[cls] = sample_distinct(f, universe_size, prng);
    }
    const uint64_t n_keep = static_cast<uint64_t>(std::llround(class_sep * static_cast<double>(f)));

    std::vector<LabeledSet> out;
    out.reserve(n);
    for (uint64_t i = 0; i < n; ++i) {
        const int cls = static_cast<int>(i % 2);
        SeqRng rng(root.split(2 + i));

        // Keep a uniform n_keep-subset of the prototype.
        std::vector<uint64_t> pool(proto[cls]);
        for (uint64_t j = 0; j < n_keep; ++j) {
            std::swap(pool[j], pool[j + rng.next_below(f - j)]);
        }
        std::unordered_set<uint64_t> members(pool.begin(),
                                             pool.begin() + static_cast<ptrdiff_t>(n_keep));
        std::vector<uint64_t> indices(pool.begin(), pool.begin() + static_cast<ptrdiff_t>(n_keep));

        // Resample the rest anywhere in the universe, keeping elements distinct.
        const uint64_t missing = f - n_keep;
        if (missing > (universe_size - n_keep) / 3) {
            // Dense regime: rejection would stall, so draw from the explicit complement.
            std::vector<uint64_t> rest;
            rest.reserve(universe_size - n_keep);
            for (uint64_t v = 0; v < universe_size; ++v) {
                if (!members.contains(v)) rest.push_back(v);
            }
            for (uint64_t j = 0; j < missing; ++j) {
                std::swap(rest[j], rest[j + rng.next_below(rest.size() - j)]);
                indices.push_back(rest[j]);
            }
        } else {
            while (indices.size() < f) {
                const uint64_t v = rng.next_below(universe_size);
                if (members.insert(v).second) indices.push_back(v);
            }
        }
        std::sort(indices.begin(), indices.end());
        out.push_back({SparseBinarySet::from_indices(std::move(indices), universe_size),
                       static_cast<int8_t>(cls == 0 ? 1 : -1)});
    }
    return out;
}

} // namespace hashlearn
