// Codec oracles: bit strings, chunk splitting, integer encoding, packet
// sizing. Everything here is independently computable, so expected values
// are literal or brute-forced.

#include <doctest.h>

#include "poolparty/bits.hpp"

using namespace poolparty;

TEST_CASE("BitString parses and prints 0/1 text") {
    const BitString s = BitString::from_string("0010010");
    CHECK(s.size() == 7);
    CHECK(s.to_string() == "0010010");
    CHECK(s.bit(0) == 0);
    CHECK(s.bit(2) == 1);
    CHECK_THROWS_AS(BitString::from_string("0012"), ParseError);
    CHECK_THROWS_AS(BitString::from_string("01 1"), ParseError);
    CHECK(BitString::from_string("").empty());
}

TEST_CASE("BitString append/slice round out the container") {
    BitString s = BitString::from_string("110");
    s.append(BitString::from_string("01"));
    CHECK(s.to_string() == "11001");
    CHECK(s.slice(1, 3).to_string() == "100");
    CHECK(s.slice(0, 0).empty());
}

TEST_CASE("matching_bits counts positionwise agreement over the overlap") {
    const BitString want = BitString::from_string("10110");
    CHECK(want.matching_bits(want) == 5);
    CHECK(BitString::from_string("10010").matching_bits(want) == 4);  // one flip
    CHECK(BitString::from_string("101").matching_bits(want) == 3);    // short
    CHECK(BitString::from_string("1011000").matching_bits(want) == 5);  // long
    CHECK(BitString::from_string("01001").matching_bits(want) == 0);  // inverse
    CHECK(BitString{}.matching_bits(want) == 0);
}

TEST_CASE("chunk_message splits exactly and refuses ragged lengths") {
    const BitString ten = BitString::from_string("1100110011");
    const auto chunks = chunk_message(ten, 5);
    REQUIRE(chunks.size() == 2);
    CHECK(chunks[0].bits().to_string() == "11001");
    CHECK(chunks[1].bits().to_string() == "10011");

    const BitString single = BitString::from_string("0010010");
    const auto one = chunk_message(single, 7);
    REQUIRE(one.size() == 1);
    CHECK(one[0].bits().to_string() == "0010010");

    CHECK_THROWS_AS(chunk_message(ten, 3), NonDivisibleMessage);
    CHECK_THROWS_AS(chunk_message(ten, 4), NonDivisibleMessage);
    CHECK(chunk_message(BitString{}, 5).empty());
}

TEST_CASE("a 35-bit message is a seven-chunk plan at pkt_size 5") {
    BitString m;
    for (int i = 0; i < 35; ++i) m.push_back(i % 2);
    CHECK(chunk_message(m, 5).size() == 7);
}

TEST_CASE("chunk_to_int is big-endian") {
    CHECK(chunk_to_int(Chunk(BitString::from_string("0010010"))) == 18);
    CHECK(chunk_to_int(Chunk(BitString::from_string("00000"))) == 0);
    CHECK(chunk_to_int(Chunk(BitString::from_string("11111"))) == 31);
    CHECK(chunk_to_int(Chunk(BitString::from_string("1"))) == 1);
}

TEST_CASE("int_to_chunk zero-pads and rejects overflow") {
    CHECK(int_to_chunk(18, 7).bits().to_string() == "0010010");
    CHECK(int_to_chunk(0, 5).bits().to_string() == "00000");
    CHECK(int_to_chunk(31, 5).bits().to_string() == "11111");
    CHECK_THROWS_AS(int_to_chunk(32, 5), ValueOutOfRange);
    CHECK_THROWS_AS(int_to_chunk(2, 1), ValueOutOfRange);
    CHECK_THROWS_AS(int_to_chunk(0, 0), ValueOutOfRange);
}

TEST_CASE("codec bijection, exhaustive over widths 1..10") {
    for (int w = 1; w <= 10; ++w) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << w); ++v) {
            const Chunk c = int_to_chunk(v, w);
            REQUIRE(c.width() == w);
            REQUIRE(chunk_to_int(c) == v);
        }
    }
}

TEST_CASE("chunk concatenation reproduces the message") {
    // Deterministic pseudo-random messages of the spec'd lengths.
    for (std::size_t len : {5u, 35u, 70u}) {
        BitString m;
        std::uint64_t x = 0x9E3779B97F4A7C15ull + len;
        for (std::size_t i = 0; i < len; ++i) {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            m.push_back(static_cast<int>(x & 1));
        }
        BitString joined;
        for (const Chunk& c : chunk_message(m, 5)) joined.append(c.bits());
        CHECK(joined == m);
    }
}

TEST_CASE("max_packet_size matches the brute-force oracle") {
    // Oracle: largest w with 2^w + 1 <= pool_size.
    auto oracle = [](int pool) {
        int best = 0;
        for (int w = 1; w <= 12; ++w) {
            if ((1LL << w) + 1 <= pool) best = w;
        }
        return best;
    };
    CHECK(max_packet_size(255) == 7);
    CHECK(max_packet_size(512) == 8);
    CHECK(max_packet_size(6) == 2);
    for (int pool = 3; pool <= 2100; ++pool) {
        REQUIRE(max_packet_size(pool) == oracle(pool));
    }
    CHECK_THROWS_AS(max_packet_size(2), PoolTooSmall);
    CHECK_THROWS_AS(max_packet_size(0), PoolTooSmall);
}
