#include "hashlearn/sketch_file.hpp"

#include <cstring>

#include "hashlearn/errors.hpp"

namespace hashlearn {

namespace {

void put_u32_le(std::string& buf, uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64_le(std::string& buf, uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t get_u32_le(const uint8_t* p) {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[i]) << (8 * i);
    return v;
}

uint64_t get_u64_le(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
    return v;
}

std::string encode_header(uint64_t universe, uint32_t k, uint8_t bits, uint64_t seed, uint64_t n) {
    std::string buf;
    buf.reserve(kSketchHeaderBytes);
    buf.append(kSketchMagic, 4);
    buf.push_back(static_cast<char>(kSketchFormatVersion));
    put_u64_le(buf, universe);
    put_u32_le(buf, k);
    buf.push_back(static_cast<char>(bits));
    put_u64_le(buf, seed);
    put_u64_le(buf, n);
    return buf;
}

} // namespace

size_t sketch_record_bytes(uint32_t k, uint8_t bits) {
    return (static_cast<size_t>(k) * bits + 7) / 8;
}

void pack_bbit_values(const BBitSketch& sketch, uint8_t* out) {
    const size_t nbytes = sketch_record_bytes(sketch.k(), sketch.bits);
    std::memset(out, 0, nbytes);
    size_t bit_pos = 0;
    for (const uint16_t value : sketch.values) {
        for (uint8_t i = 0; i < sketch.bits; ++i, ++bit_pos) {
            if ((value >> i) & 1) out[bit_pos >> 3] |= static_cast<uint8_t>(1u << (bit_pos & 7));
        }
    }
}

BBitSketch unpack_bbit_values(const uint8_t* data, uint32_t k, uint8_t bits) {
    BBitSketch sketch;
    sketch.bits = bits;
    sketch.values.resize(k);
    size_t bit_pos = 0;
    for (uint32_t j = 0; j < k; ++j) {
        uint16_t value = 0;
        for (uint8_t i = 0; i < bits; ++i, ++bit_pos) {
            if ((data[bit_pos >> 3] >> (bit_pos & 7)) & 1) value |= static_cast<uint16_t>(1u << i);
        }
        sketch.values[j] = value;
    }
    return sketch;
}

SketchFileWriter::SketchFileWriter(const std::string& path, uint64_t universe_size, uint32_t k,
                                   uint8_t bits, uint64_t seed)
    : path_(path), universe_size_(universe_size), k_(k), bits_(bits), seed_(seed) {
    if (k < 1) throw std::invalid_argument("sketch file: k must be >= 1");
    if (bits < 1 || bits > 16) throw std::invalid_argument("sketch file: b must be in [1, 16]");
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw io_error("cannot open " + path + " for writing");
    const std::string header = encode_header(universe_size, k, bits, seed, 0);
    out_.write(header.data(), static_cast<std::streamsize>(header.size()));
    record_buf_.resize(sketch_record_bytes(k, bits));
}

SketchFileWriter::~SketchFileWriter() {
    if (!finalized_ && out_.is_open()) {
        try {
            finalize();
        } catch (...) {
        }
    }
}

void SketchFileWriter::append(const BBitSketch& sketch, int8_t label) {
    if (finalized_) throw std::logic_error("sketch file already finalized");
    if (sketch.k() != k_ || sketch.bits != bits_) {
        throw std::invalid_argument("sketch file: record shape does not match header");
    }
    pack_bbit_values(sketch, record_buf_.data());
    out_.write(reinterpret_cast<const char*>(record_buf_.data()),
               static_cast<std::streamsize>(record_buf_.size()));
    labels_.push_back(label);
}

void SketchFileWriter::finalize() {
    if (finalized_) return;
    out_.write(reinterpret_cast<const char*>(labels_.data()),
               static_cast<std::streamsize>(labels_.size()));
    out_.seekp(0);
    const std::string header = encode_header(universe_size_, k_, bits_, seed_, labels_.size());
    out_.write(header.data(), static_cast<std::streamsize>(header.size()));
    out_.close();
    if (!out_) throw io_error("write failure on " + path_);
    finalized_ = true;
}

namespace {

SketchFileHeader parse_header(std::ifstream& in, const std::string& path) {
    uint8_t raw[kSketchHeaderBytes];
    in.read(reinterpret_cast<char*>(raw), kSketchHeaderBytes);
    if (in.gcount() != static_cast<std::streamsize>(kSketchHeaderBytes)) {
        throw io_error(path + ": truncated sketch header");
    }
    if (std::memcmp(raw, kSketchMagic, 4) != 0) throw io_error(path + ": not a sketch file (bad magic)");
    if (raw[4] != kSketchFormatVersion) {
        throw io_error(path + ": unsupported sketch format version " + std::to_string(raw[4]));
    }
    SketchFileHeader header;
    header.universe_size = get_u64_le(raw + 5);
    header.k = get_u32_le(raw + 13);
    header.bits = raw[17];
    header.seed = get_u64_le(raw + 18);
    header.record_count = get_u64_le(raw + 26);
    return header;
}

} // namespace

SketchFileHeader read_sketch_header(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    return parse_header(in, path);
}

SketchFileData read_sketch_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    SketchFileData data;
    data.header = parse_header(in, path);
    const size_t rec_bytes = sketch_record_bytes(data.header.k, data.header.bits);
    std::vector<uint8_t> buf(rec_bytes);
    data.sketches.reserve(data.header.record_count);
    for (uint64_t i = 0; i < data.header.record_count; ++i) {
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(rec_bytes));
        if (in.gcount() != static_cast<std::streamsize>(rec_bytes)) {
            throw io_error(path + ": truncated at record " + std::to_string(i));
        }
        data.sketches.push_back(unpack_bbit_values(buf.data(), data.header.k, data.header.bits));
    }
    data.labels.resize(data.header.record_count);
    in.read(reinterpret_cast<char*>(data.labels.data()),
            static_cast<std::streamsize>(data.labels.size()));
    if (in.gcount() != static_cast<std::streamsize>(data.labels.size())) {
        throw io_error(path + ": truncated label block");
    }
    return data;
}

} // namespace hashlearn
