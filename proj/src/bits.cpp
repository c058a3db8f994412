#include "poolparty/bits.hpp"

namespace poolparty {

BitString BitString::from_string(const std::string& text) {
    BitString out;
    out.m_bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw ParseError("bit string may contain only '0'/'1', got '" +
                             std::string(1, c) + "'");
        }
        out.m_bits.push_back(c == '1' ? 1 : 0);
    }
    return out;
}

void BitString::append(const BitString& other) {
    m_bits.insert(m_bits.end(), other.m_bits.begin(), other.m_bits.end());
}

BitString BitString::slice(std::size_t begin, std::size_t count) const {
    BitString out;
    out.m_bits.assign(m_bits.begin() + begin, m_bits.begin() + begin + count);
    return out;
}

std::string BitString::to_string() const {
    std::string out;
    out.reserve(m_bits.size());
    for (auto b : m_bits) out.push_back(b ? '1' : '0');
    return out;
}

std::size_t BitString::matching_bits(const BitString& reference) const {
    std::size_t n = std::min(m_bits.size(), reference.m_bits.size());
    std::size_t matched = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (m_bits[i] == reference.m_bits[i]) ++matched;
    }
    return matched;
}

Chunk::Chunk(BitString bits) : m_bits(std::move(bits)) {
    if (m_bits.empty()) throw ValueOutOfRange("chunk width must be >= 1");
}

std::vector<Chunk> chunk_message(const BitString& message, int width) {
    if (width < 1) throw ValueOutOfRange("packet width must be >= 1");
    if (message.size() % static_cast<std::size_t>(width) != 0) {
        throw NonDivisibleMessage(
            "message length " + std::to_string(message.size()) +
            " is not a multiple of packet width " + std::to_string(width));
    }
    std::vector<Chunk> chunks;
    chunks.reserve(message.size() / width);
    for (std::size_t at = 0; at < message.size(); at += width) {
        chunks.emplace_back(message.slice(at, width));
    }
    return chunks;
}

std::uint64_t chunk_to_int(const Chunk& chunk) {
    std::uint64_t value = 0;
    for (int i = 0; i < chunk.width(); ++i) {
        value = (value << 1) | static_cast<std::uint64_t>(chunk.bits().bit(i));
    }
    return value;
}

Chunk int_to_chunk(std::uint64_t value, int width) {
    if (width < 1 || width > 63) throw ValueOutOfRange("packet width must be in [1, 63]");
    if (value >> width) {
        throw ValueOutOfRange("value " + std::to_string(value) +
                              " does not fit in " + std::to_string(width) + " bits");
    }
    BitString bits;
    for (int i = width - 1; i >= 0; --i) {
        bits.push_back(static_cast<int>((value >> i) & 1));
    }
    return Chunk(std::move(bits));
}

int max_packet_size(int pool_size) {
    if (pool_size < 3) {
        throw PoolTooSmall("pool of " + std::to_string(pool_size) +
                           " cannot carry a packet (needs 2^w + 1 <= pool, so >= 3)");
    }
    int width = 1;
    // 2^(w+1) + 1 <= pool_size  <=>  next width still fits.
    while (width < 62 && ((std::uint64_t{2} << width) + 1) <= static_cast<std::uint64_t>(pool_size)) {
        ++width;
    }
    return width;
}

}  // namespace poolparty
