#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hashlearn/errors.hpp"
#include "hashlearn/rng.hpp"
#include "hashlearn/sketch_file.hpp"

using namespace hashlearn;

namespace {

BBitSketch random_sketch(uint32_t k, uint8_t b, SeqRng& rng) {
    BBitSketch s;
    s.bits = b;
    s.values.resize(k);
    for (uint32_t j = 0; j < k; ++j)
        s.values[j] = static_cast<uint16_t>(rng.next_below(uint64_t{1} << b));
    return s;
}

struct Cleanup {
    std::string path;
    ~Cleanup() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("record byte width is ceil(k b / 8)") {
    CHECK(sketch_record_bytes(100, 2) == 25);
    CHECK(sketch_record_bytes(3, 3) == 2);
    CHECK(sketch_record_bytes(8, 8) == 8);
    CHECK(sketch_record_bytes(1, 1) == 1);
    CHECK(sketch_record_bytes(5, 16) == 10);
    CHECK(sketch_record_bytes(7, 12) == 11); // 84 bits
}

TEST_CASE("bit packing round-trips every width") {
    SeqRng rng(uint64_t{4040});
    for (uint8_t b : {uint8_t{1}, uint8_t{3}, uint8_t{7}, uint8_t{8}, uint8_t{12}, uint8_t{16}}) {
        for (uint32_t k : {1u, 5u, 8u, 33u, 100u}) {
            const auto s = random_sketch(k, b, rng);
            std::vector<uint8_t> buf(sketch_record_bytes(k, b), 0);
            pack_bbit_values(s, buf.data());
            const auto back = unpack_bbit_values(buf.data(), k, b);
            CHECK(back.bits == b);
            CHECK(back.values == s.values);
        }
    }
}

TEST_CASE("packing is little-endian within the record") {
    BBitSketch s;
    s.bits = 4;
    s.values = {0x1, 0xF, 0x3}; // 12 bits -> 2 bytes
    std::vector<uint8_t> buf(2, 0);
    pack_bbit_values(s, buf.data());
    // First value in the low nibble of byte 0, second in the high nibble.
    CHECK(buf[0] == 0xF1);
    CHECK(buf[1] == 0x03);
}

TEST_CASE("sketch file writes and reads back") {
    const std::string path = "sk_roundtrip.tmp";
    Cleanup c{path};
    SeqRng rng(uint64_t{11});
    std::vector<BBitSketch> sketches;
    std::vector<int8_t> labels;
    {
        SketchFileWriter writer(path, 1 << 16, 12, 5, 909);
        for (int i = 0; i < 7; ++i) {
            sketches.push_back(random_sketch(12, 5, rng));
            labels.push_back(i % 2 ? 1 : -1);
            writer.append(sketches.back(), labels.back());
        }
        writer.finalize();
    }
    const auto header = read_sketch_header(path);
    CHECK(header.universe_size == (uint64_t{1} << 16));
    CHECK(header.k == 12);
    CHECK(header.bits == 5);
    CHECK(header.seed == 909);
    CHECK(header.record_count == 7);

    const auto data = read_sketch_file(path);
    CHECK(data.header.record_count == 7);
    REQUIRE(data.sketches.size() == 7);
    REQUIRE(data.labels.size() == 7);
    for (int i = 0; i < 7; ++i) {
        CHECK(data.sketches[i].values == sketches[i].values);
        CHECK(data.labels[i] == labels[i]);
    }
    // Size accounting: header + records + label block.
    const auto size = std::filesystem::file_size(path);
    CHECK(size == kSketchHeaderBytes + 7 * sketch_record_bytes(12, 5) + 7);
}

TEST_CASE("a rewritten file with the same inputs is byte-identical") {
    const std::string p1 = "sk_det1.tmp", p2 = "sk_det2.tmp";
    Cleanup c1{p1}, c2{p2};
    for (const auto& path : {p1, p2}) {
        SeqRng rng(uint64_t{500});
        SketchFileWriter writer(path, 4096, 8, 2, 3);
        for (int i = 0; i < 5; ++i) writer.append(random_sketch(8, 2, rng), 1);
        writer.finalize();
    }
    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    const std::string b1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    const std::string b2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(b1 == b2);
    CHECK(b1.size() == kSketchHeaderBytes + 5 * 2 + 5);
}

TEST_CASE("reader rejects damaged files") {
    const std::string path = "sk_damage.tmp";
    Cleanup c{path};
    {
        SeqRng rng(uint64_t{42});
        SketchFileWriter writer(path, 256, 4, 4, 0);
        for (int i = 0; i < 3; ++i) writer.append(random_sketch(4, 4, rng), -1);
        writer.finalize();
    }
    // Truncation: drop the label block and one record byte.
    {
        std::ifstream in(path, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        bytes.resize(bytes.size() - 4);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << bytes;
    }
    CHECK_THROWS_AS(read_sketch_file(path), io_error);

    // Wrong magic.
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << "NOPE" << std::string(40, '\0');
    }
    CHECK_THROWS_AS(read_sketch_header(path), io_error);

    // Unsupported version byte.
    {
        SeqRng rng(uint64_t{42});
        SketchFileWriter writer(path, 256, 4, 4, 0);
        writer.append(random_sketch(4, 4, rng), 1);
        writer.finalize();
        std::fstream patch(path, std::ios::binary | std::ios::in | std::ios::out);
        patch.seekp(4);
        patch.put(static_cast<char>(9));
    }
    CHECK_THROWS_AS(read_sketch_header(path), io_error);

    CHECK_THROWS_AS(read_sketch_file("sk_does_not_exist.tmp"), io_error);
}

TEST_CASE("writer refuses appends after finalize") {
    const std::string path = "sk_final.tmp";
    Cleanup c{path};
    SeqRng rng(uint64_t{77});
    SketchFileWriter writer(path, 64, 4, 2, 0);
    writer.append(random_sketch(4, 2, rng), 1);
    writer.finalize();
    CHECK_THROWS(writer.append(random_sketch(4, 2, rng), 1));
}
