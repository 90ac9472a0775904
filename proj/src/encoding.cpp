#include "wsnac/encoding.hpp"

#include <limits>

#include "wsnac/errors.hpp"

namespace wsnac {

namespace {

void append_field(Bytes& out, ByteView field) {
    if (field.size() > std::numeric_limits<uint32_t>::max()) {
        throw Error(ErrorCode::FieldTooLong);
    }
    put_u32_be(out, uint32_t(field.size()));
    append(out, field);
}

}  // namespace

Bytes encode_fields(std::span<const Bytes> fields) {
    Bytes out;
    for (const Bytes& f : fields) append_field(out, f);
    return out;
}

Bytes encode_fields(std::initializer_list<ByteView> fields) {
    Bytes out;
    for (ByteView f : fields) append_field(out, f);
    return out;
}

std::vector<Bytes> decode_fields(ByteView data) {
    std::vector<Bytes> fields;
    size_t pos = 0;
    while (pos < data.size()) {
        if (data.size() - pos < 4) throw Error(ErrorCode::MalformedMessage, "truncated length");
        uint32_t len = (uint32_t(data[pos]) << 24) | (uint32_t(data[pos + 1]) << 16) |
                       (uint32_t(data[pos + 2]) << 8) | uint32_t(data[pos + 3]);
        pos += 4;
        if (data.size() - pos < len) throw Error(ErrorCode::MalformedMessage, "truncated field");
        fields.emplace_back(data.begin() + long(pos), data.begin() + long(pos + len));
        pos += len;
    }
    return fields;
}

std::string hex_encode(ByteView data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

Bytes hex_decode(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2) throw Error(ErrorCode::MalformedMessage, "odd hex length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = nibble(hex[i]), lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) throw Error(ErrorCode::MalformedMessage, "bad hex digit");
        out.push_back(uint8_t(hi << 4 | lo));
    }
    return out;
}

}  // namespace wsnac
