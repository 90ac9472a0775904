#pragma once

#include <array>
#include <cstdint>

#include "wsnac/bytes.hpp"

namespace wsnac {

inline constexpr size_t kDigestSize = 32;
inline constexpr const char* kHashAlgorithm = "sha256";

struct Digest {
    std::array<uint8_t, kDigestSize> bytes{};

    bool operator==(const Digest&) const = default;

    ByteView view() const { return ByteView(bytes.data(), bytes.size()); }
    Bytes to_bytes() const { return Bytes(bytes.begin(), bytes.end()); }
    std::array<uint8_t, 8> first8() const {
        std::array<uint8_t, 8> r;
        for (size_t i = 0; i < 8; ++i) r[i] = bytes[i];
        return r;
    }
};

// SHA-256. Every call bumps a process-wide counter so protocol phases can
// report exact hash-operation counts.
Digest hash(ByteView data);

uint64_t hash_op_count();

}  // namespace wsnac
