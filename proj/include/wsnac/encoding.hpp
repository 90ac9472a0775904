#pragma once

#include <initializer_list>

#include "wsnac/bytes.hpp"

namespace wsnac {

// Canonical field concatenation: each field is emitted as a 4-byte
// big-endian length followed by its bytes. Injective on field sequences,
// unlike raw concatenation, so no two distinct message layouts collide.
Bytes encode_fields(std::span<const Bytes> fields);
Bytes encode_fields(std::initializer_list<ByteView> fields);

// Inverse of encode_fields. Throws Error(MalformedMessage) on truncated or
// trailing input.
std::vector<Bytes> decode_fields(ByteView data);

}  // namespace wsnac
