#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wsnac {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline std::string to_string(ByteView b) {
    return std::string(b.begin(), b.end());
}

inline void append(Bytes& out, ByteView more) {
    out.insert(out.end(), more.begin(), more.end());
}

std::string hex_encode(ByteView data);
Bytes hex_decode(std::string_view hex);  // throws Error(MalformedMessage) on bad input

// Bytewise XOR of two equal-length 8-byte values.
inline std::array<uint8_t, 8> xor8(const std::array<uint8_t, 8>& a,
                                   const std::array<uint8_t, 8>& b) {
    std::array<uint8_t, 8> r;
    for (size_t i = 0; i < 8; ++i) r[i] = a[i] ^ b[i];
    return r;
}

inline void put_u32_be(Bytes& out, uint32_t v) {
    out.push_back(uint8_t(v >> 24));
    out.push_back(uint8_t(v >> 16));
    out.push_back(uint8_t(v >> 8));
    out.push_back(uint8_t(v));
}

inline std::array<uint8_t, 8> u64_be(uint64_t v) {
    std::array<uint8_t, 8> r;
    for (int i = 7; i >= 0; --i) {
        r[size_t(i)] = uint8_t(v & 0xff);
        v >>= 8;
    }
    return r;
}

inline uint64_t u64_from_be(const std::array<uint8_t, 8>& b) {
    uint64_t v = 0;
    for (uint8_t byte : b) v = (v << 8) | byte;
    return v;
}

}  // namespace wsnac
