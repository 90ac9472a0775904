#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>

#include "wsnac/bytes.hpp"

namespace wsnac {

// Deterministic random source. One instance drives a whole simulated
// scenario; every entity draw (keys, scalars, nonces, blinding values,
// polynomial coefficients) comes from here in a fixed, documented order so
// that a (config, seed) pair replays to a byte-identical transcript.
//
// Only raw mt19937_64 outputs are consumed; std::*_distribution is avoided
// because its output is not pinned down by the standard.
class DetRng {
public:
    explicit DetRng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    Bytes bytes(size_t count) {
        Bytes out;
        out.reserve(count);
        while (out.size() < count) {
            auto block = u64_be(next_u64());
            for (size_t i = 0; i < 8 && out.size() < count; ++i) out.push_back(block[i]);
        }
        return out;
    }

    std::array<uint8_t, 8> nonce() {
        return u64_be(next_u64());
    }

    // Uniform integer in [0, bound) by masked rejection sampling.
    mpz_class below(const mpz_class& bound) {
        size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
        size_t nbytes = (bits + 7) / 8;
        unsigned top_mask = bits % 8 ? (1u << (bits % 8)) - 1 : 0xffu;
        for (;;) {
            Bytes raw = bytes(nbytes);
            raw[0] &= uint8_t(top_mask);
            mpz_class v;
            mpz_import(v.get_mpz_t(), raw.size(), 1, 1, 1, 0, raw.data());
            if (v < bound) return v;
        }
    }

    // Uniform in [1, modulus): the usual draw for secret scalars, where zero
    // would collapse a public point to infinity.
    mpz_class nonzero_below(const mpz_class& modulus) {
        return below(modulus - 1) + 1;
    }

    uint64_t below_u64(uint64_t bound) {
        uint64_t limit = bound * ((~uint64_t{0}) / bound);
        for (;;) {
            uint64_t v = next_u64();
            if (v < limit) return v % bound;
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace wsnac
