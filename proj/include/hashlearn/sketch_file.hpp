#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "hashlearn/minwise.hpp"

namespace hashlearn {

// Binary sketch format:
//   "BBMH" | version u8 | D u64 | k u32 | b u8 | seed u64 | n u64   (all LE)
// followed by n records of ceil(k*b/8) bytes (values bit-packed LSB-first
// within each record), then n labels as a parallel i8 array.

inline constexpr char kSketchMagic[4] = {'B', 'B', 'M', 'H'};
inline constexpr uint8_t kSketchFormatVersion = 1;
inline constexpr size_t kSketchHeaderBytes = 4 + 1 + 8 + 4 + 1 + 8 + 8;

struct SketchFileHeader {
    uint64_t universe_size = 0;
    uint32_t k = 0;
    uint8_t bits = 0;
    uint64_t seed = 0;
    uint64_t record_count = 0;
};

/// Bytes per bit-packed record, ceil(k*b/8).
size_t sketch_record_bytes(uint32_t k, uint8_t bits);

void pack_bbit_values(const BBitSketch& sketch, uint8_t* out);
BBitSketch unpack_bbit_values(const uint8_t* data, uint32_t k, uint8_t bits);

/// Streaming writer: records are appended one at a time; labels are held
/// back and written after the record block, and the header count is patched
/// on finalize.
class SketchFileWriter {
public:
    SketchFileWriter(const std::string& path, uint64_t universe_size, uint32_t k,
                     uint8_t bits, uint64_t seed);
    ~SketchFileWriter();

    SketchFileWriter(const SketchFileWriter&) = delete;
    SketchFileWriter& operator=(const SketchFileWriter&) = delete;

    void append(const BBitSketch& sketch, int8_t label);
    void finalize();

    uint64_t record_count() const { return labels_.size(); }

private:
    std::ofstream out_;
    std::string path_;
    uint64_t universe_size_;
    uint32_t k_;
    uint8_t bits_;
    uint64_t seed_;
    std::vector<int8_t> labels_;
    std::vector<uint8_t> record_buf_;
    bool finalized_ = false;
};

struct SketchFileData {
    SketchFileHeader header;
    std::vector<BBitSketch> sketches;
    std::vector<int8_t> labels;
};

SketchFileHeader read_sketch_header(const std::string& path);
SketchFileData read_sketch_file(const std::string& path);

} // namespace hashlearn
