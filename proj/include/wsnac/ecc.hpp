#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "wsnac/bytes.hpp"
#include "wsnac/rng.hpp"
#include "wsnac/symcipher.hpp"

namespace wsnac::ecc {

// Affine point on a short-Weierstrass curve, with an explicit identity.
struct CurvePoint {
    bool inf = true;
    mpz_class x;
    mpz_class y;

    static CurvePoint infinity() { return CurvePoint{}; }
    static CurvePoint affine(mpz_class px, mpz_class py) {
        return CurvePoint{false, std::move(px), std::move(py)};
    }

    bool is_infinity() const { return inf; }
    bool operator==(const CurvePoint& o) const {
        if (inf || o.inf) return inf == o.inf;
        return x == o.x && y == o.y;
    }
};

// y^2 = x^3 + ax + b over GF(p); G generates a subgroup of prime order n.
struct CurveParams {
    std::string name;  // "toy17", "p160", or "custom"
    mpz_class p;
    mpz_class a;
    mpz_class b;
    CurvePoint g;
    mpz_class n;

    size_t field_bytes() const { return (mpz_sizeinbase(p.get_mpz_t(), 2) + 7) / 8; }
    size_t scalar_bytes() const { return (mpz_sizeinbase(n.get_mpz_t(), 2) + 7) / 8; }
};

// Integer modulo the group order n. All secret keys, shares, and polynomial
// coefficients live here (the scalar ring of the group, not GF(p)).
struct Scalar {
    mpz_class v;

    bool operator==(const Scalar&) const = default;
};

inline Scalar reduce(const mpz_class& value, const mpz_class& order) {
    mpz_class r = value % order;
    if (r < 0) r += order;
    return Scalar{r};
}

// Inverse of x mod m. Throws Error(NonInvertibleDifference) when gcd != 1.
mpz_class mod_inverse(const mpz_class& x, const mpz_class& m);

struct ValidityReport {
    bool ok = true;
    std::string violation;  // first violated condition, empty when ok
};

// Checks, in order: p prime; nonzero discriminant 4a^3+27b^2 mod p; a,b in
// range; G on curve and not infinity; n prime; n*G = infinity.
ValidityReport validate_params(const CurveParams& params);

bool is_on_curve(const CurvePoint& pt, const CurveParams& params);

// Full affine group law: identity, inverse, doubling, generic chord.
// Throws Error(PointNotOnCurve) if either operand is off the curve.
CurvePoint point_add(const CurvePoint& p, const CurvePoint& q, const CurveParams& params);

CurvePoint point_negate(const CurvePoint& p, const CurveParams& params);

// Double-and-add. k may be any non-negative integer; callers normally pass
// a reduced Scalar value.
CurvePoint scalar_mul(const mpz_class& k, const CurvePoint& p, const CurveParams& params);
inline CurvePoint scalar_mul(const Scalar& k, const CurvePoint& p, const CurveParams& params) {
    return scalar_mul(k.v, p, params);
}

// Exhaustive point enumeration (including infinity) for desk-scale curves.
// Guarded: throws Error(ParamsTooLarge) when p >= 2^20.
std::vector<CurvePoint> enumerate_points(const CurveParams& params);

// Wire forms. Point: 0x00 alone for infinity, else 0x04 || x || y with both
// coordinates fixed-width big-endian (field width). Scalar: fixed-width
// big-endian at the order's width.
Bytes point_encode(const CurvePoint& pt, const CurveParams& params);
CurvePoint point_decode(ByteView data, const CurveParams& params);
Bytes scalar_encode(const Scalar& s, const CurveParams& params);
Scalar scalar_decode(ByteView data, const CurveParams& params);

// Fixed-width big-endian x-coordinate; the "N_ix" of the protocol messages.
Bytes x_coordinate_bytes(const CurvePoint& pt, const CurveParams& params);

// Symmetric key from a point: h(encode([x-coordinate])). Throws
// Error(InfinityPoint) for the identity, which has no x.
SymKey derive_sym_key(const CurvePoint& pt, const CurveParams& params);

// Shipped parameter sets.
CurveParams toy17();  // p=17, a=2, b=2, G=(5,1), n=19 (whole group, prime order)
CurveParams p160();   // SECG secp160r1

// Key-value text schema: lines "key = value" with keys p,a,b,gx,gy,n and
// optional name; integers decimal or 0x-prefixed hex; '#' starts a comment.
CurveParams parse_curve_text(const std::string& text);
std::string curve_to_text(const CurveParams& params);
CurveParams load_curve_file(const std::string& path);

// Scalar draw helper: uniform in [1, n).
inline Scalar random_scalar(DetRng& rng, const CurveParams& params) {
    return Scalar{rng.nonzero_below(params.n)};
}

}  // namespace wsnac::ecc
