#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "hashlearn/learner.hpp"
#include "hashlearn/sparse_set.hpp"

namespace hashlearn {

// Sparse text format, one record per line:
//   <label> <idx>:<val> <idx>:<val> ...
// Labels are +1/1/-1, or 0 when zero_label_as_negative maps it to -1.
// Indices are 1-based and strictly ascending on each line; values are
// nonzero reals. Comment lines are not part of the format and are rejected.

struct ReaderOptions {
    bool zero_label_as_negative = false;
};

struct ParsedRecord {
    int8_t label = 1;
    std::vector<std::pair<uint64_t, double>> entries; // 0-based, ascending
};

/// Streaming line-at-a-time reader; memory is bounded by the largest
/// record. Throws parse_error (with line number) on malformed input.
class SparseTextReader {
public:
    explicit SparseTextReader(const std::string& path, ReaderOptions opts = {});

    /// False at end of stream.
    bool next(ParsedRecord& out);

    const std::string& path() const { return path_; }
    uint64_t line_number() const { return line_; }

private:
    std::ifstream in_;
    std::string path_;
    ReaderOptions opts_;
    uint64_t line_ = 0;
    std::string buf_;
};

struct DatasetStats {
    uint64_t n = 0;
    uint64_t universe_size = 0; // max feature index + 1
    double nnz_median = 0;
    double nnz_mean = 0;
};

/// Exact stats in one pass. The median comes from a histogram of per-record
/// counts, so memory stays bounded by the largest record; for even n it is
/// the mean of the two middle counts. Throws on an empty stream.
DatasetStats compute_stats(SparseTextReader& reader);
DatasetStats compute_stats_file(const std::string& path, ReaderOptions opts = {});

struct BinaryDataset {
    std::vector<LabeledSet> records;
    DatasetStats stats;
};

struct RealDataset {
    std::vector<LabeledExample> examples;
    DatasetStats stats;
};

/// Load a whole file as binary sets (any nonzero value counts as
/// membership). The universe defaults to max index + 1; an override must
/// cover that.
BinaryDataset load_binary_dataset(const std::string& path, ReaderOptions opts = {},
                                  uint64_t universe_override = 0);

/// Load a whole file keeping real values.
RealDataset load_real_dataset(const std::string& path, ReaderOptions opts = {},
                              uint64_t universe_override = 0);

void write_sparse_text(const std::string& path, const std::vector<LabeledExample>& examples);
void write_sparse_text(const std::string& path, const std::vector<LabeledSet>& records);

/// Feature-combination expansion over a combined index space:
///   singles stay at their index in [0, D);
///   pair {i < j} goes to D + i*D + j;
///   triple {i < j < k} goes to D + D^2 + (i*D + j)*D + k, kept iff its
///   pair-free index (i*D + j)*D + k is divisible by triples_mod.
/// triples_mod = 0 drops triples entirely (the combined universe is then
/// D + D^2 instead of D + D^2 + D^3); triples_mod = 1 keeps them all.
/// Distinct combinations never collide. Throws when the combined universe
/// overflows 64 bits.
SparseBinarySet expand_combinations(const SparseBinarySet& s, uint64_t triples_mod);

/// Planted-prototype generator: one random prototype set of size f per
/// class, and each example resamples a (1 - class_sep) fraction of its
/// class prototype. Labels alternate +1/-1, so classes stay balanced and
/// every record has exactly f elements.
std::vector<LabeledSet> generate_synthetic(uint64_t n, uint64_t universe_size, uint64_t f,
                                           double class_sep, uint64_t seed);

} // namespace hashlearn
