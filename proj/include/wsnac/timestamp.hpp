#pragma once

#include <compare>
#include <cstdint>

#include "wsnac/bytes.hpp"
#include "wsnac/hash.hpp"

namespace wsnac {

// Logical clock tick. Wire form is 8 bytes big-endian; all the protocol's
// time values are ticks of one simulated clock, never wall time.
struct Timestamp {
    uint64_t ticks = 0;

    auto operator<=>(const Timestamp&) const = default;

    std::array<uint8_t, 8> encode() const { return u64_be(ticks); }
    Bytes to_bytes() const {
        auto e = encode();
        return Bytes(e.begin(), e.end());
    }
    static Timestamp decode(const std::array<uint8_t, 8>& b) { return {u64_from_be(b)}; }
};

// Monotone tick source owned by a simulation.
struct LogicalClock {
    uint64_t ticks = 0;

    Timestamp now() const { return {ticks}; }
    void advance(uint64_t by = 1) { ticks += by; }
};

// T ⊕ S for a timestamp and a digest-valued mask: bytewise XOR of the 8-byte
// timestamp encoding with the mask's first 8 bytes. Self-inverse.
inline std::array<uint8_t, 8> xor_mask(const Timestamp& ts, const Digest& mask) {
    return xor8(ts.encode(), mask.first8());
}

inline Timestamp unmask_timestamp(const std::array<uint8_t, 8>& masked, const Digest& mask) {
    return Timestamp::decode(xor8(masked, mask.first8()));
}

}  // namespace wsnac
