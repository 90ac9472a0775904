#pragma once

#include <array>

#include "wsnac/bytes.hpp"
#include "wsnac/hash.hpp"

namespace wsnac {

struct SymKey {
    std::array<uint8_t, 32> bytes{};

    bool operator==(const SymKey&) const = default;

    static SymKey from_digest(const Digest& d) {
        SymKey k;
        k.bytes = d.bytes;
        return k;
    }
    ByteView view() const { return ByteView(bytes.data(), bytes.size()); }
};

// Authenticated ciphertext of the hash-counter stream cipher below.
// body is exactly as long as the plaintext; tag covers (key, nonce, body).
struct AuthCiphertext {
    std::array<uint8_t, 8> nonce{};
    Bytes body;
    Digest tag;

    bool operator==(const AuthCiphertext&) const = default;

    Bytes to_bytes() const;
    static AuthCiphertext from_bytes(ByteView data);
};

// Symmetric authenticated encryption built from the hash alone:
//   keystream block j = h(encode([key, nonce, j]))      (j as 4-byte BE)
//   body             = plaintext XOR keystream
//   tag              = h(encode([key, nonce, body]))
// Deterministic given (key, nonce, plaintext). NOT a production cipher —
// it exists so simulated runs are bit-exact and dependency-free.
AuthCiphertext sym_encrypt(const SymKey& key, const std::array<uint8_t, 8>& nonce,
                           ByteView plaintext);

// Returns the plaintext iff the recomputed tag matches; otherwise throws
// Error(AuthFailure) — tampering or wrong key.
Bytes sym_decrypt(const SymKey& key, const AuthCiphertext& ct);

}  // namespace wsnac
