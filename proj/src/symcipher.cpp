#include "wsnac/symcipher.hpp"

#include "wsnac/encoding.hpp"
#include "wsnac/errors.hpp"

namespace wsnac {

namespace {

Bytes keystream(const SymKey& key, const std::array<uint8_t, 8>& nonce, size_t length) {
    Bytes stream;
    stream.reserve(length + kDigestSize);
    uint32_t block = 0;
    while (stream.size() < length) {
        Bytes counter;
        put_u32_be(counter, block++);
        Digest d = hash(encode_fields({key.view(), ByteView(nonce), ByteView(counter)}));
        append(stream, d.view());
    }
    stream.resize(length);
    return stream;
}

Digest compute_tag(const SymKey& key, const std::array<uint8_t, 8>& nonce, ByteView body) {
    return hash(encode_fields({key.view(), ByteView(nonce), body}));
}

}  // namespace

AuthCiphertext sym_encrypt(const SymKey& key, const std::array<uint8_t, 8>& nonce,
                           ByteView plaintext) {
    AuthCiphertext ct;
    ct.nonce = nonce;
    ct.body = keystream(key, nonce, plaintext.size());
    for (size_t i = 0; i < plaintext.size(); ++i) ct.body[i] ^= plaintext[i];
    ct.tag = compute_tag(key, nonce, ct.body);
    return ct;
}

Bytes sym_decrypt(const SymKey& key, const AuthCiphertext& ct) {
    if (compute_tag(key, ct.nonce, ct.body) != ct.tag) {
        throw Error(ErrorCode::AuthFailure, "ciphertext tag mismatch");
    }
    Bytes plain = keystream(key, ct.nonce, ct.body.size());
    for (size_t i = 0; i < ct.body.size(); ++i) plain[i] ^= ct.body[i];
    return plain;
}

Bytes AuthCiphertext::to_bytes() const {
    return encode_fields({ByteView(nonce), ByteView(body), tag.view()});
}

AuthCiphertext AuthCiphertext::from_bytes(ByteView data) {
    auto fields = decode_fields(data);
    if (fields.size() != 3 || fields[0].size() != 8 || fields[2].size() != kDigestSize) {
        throw Error(ErrorCode::MalformedMessage, "bad ciphertext record");
    }
    AuthCiphertext ct;
    std::copy(fields[0].begin(), fields[0].end(), ct.nonce.begin());
    ct.body = std::move(fields[1]);
    std::copy(fields[2].begin(), fields[2].end(), ct.tag.bytes.begin());
    return ct;
}

}  // namespace wsnac
