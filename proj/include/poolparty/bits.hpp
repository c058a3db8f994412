#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "poolparty/errors.hpp"

namespace poolparty {

// A message on the covert channel: an ordered sequence of bits. Kept as one
// byte per bit — messages here are tens of bits, clarity beats packing.
class BitString {
public:
    BitString() = default;

    // Parse from "0"/"1" characters; throws ParseError on anything else.
    static BitString from_string(const std::string& text);

    std::size_t size() const { return m_bits.size(); }
    bool empty() const { return m_bits.empty(); }

    int bit(std::size_t i) const { return m_bits[i]; }

    void push_back(int b) { m_bits.push_back(b ? 1 : 0); }
    void append(const BitString& other);

    // Half-open [begin, begin+count) slice; caller keeps indices in range.
    BitString slice(std::size_t begin, std::size_t count) const;

    std::string to_string() const;

    bool operator==(const BitString& other) const = default;

    // Positions where this and `reference` agree, over the shorter of the
    // two. Used for partial-credit scoring: equal strings score their full
    // length, so an exact match is exactly a full score.
    std::size_t matching_bits(const BitString& reference) const;

private:
    std::vector<std::uint8_t> m_bits;
};

// One packet on the wire: `width` bits, most significant first.
class Chunk {
public:
    Chunk(BitString bits);  // width == bits.size(); must be >= 1

    const BitString& bits() const { return m_bits; }
    int width() const { return static_cast<int>(m_bits.size()); }

    bool operator==(const Chunk& other) const = default;

private:
    BitString m_bits;
};

// Split a message into width-w chunks, in order. Throws NonDivisibleMessage
// when the length is not a multiple of w — padding is the caller's policy.
std::vector<Chunk> chunk_message(const BitString& message, int width);

// Big-endian chunk value: chunk_to_int("0010010") == 18.
std::uint64_t chunk_to_int(const Chunk& chunk);

// Inverse of chunk_to_int for a given width; throws ValueOutOfRange when the
// value needs more than `width` bits.
Chunk int_to_chunk(std::uint64_t value, int width);

// Widest packet a pool of `pool_size` slots can carry. The encoding maps a
// w-bit value v to v+1 released slots, and termination needs one value above
// the data range, so the pool must hold 2^w + 1 slots: largest w with
// 2^w + 1 <= pool_size. Throws PoolTooSmall below 3.
int max_packet_size(int pool_size);

}  // namespace poolparty
