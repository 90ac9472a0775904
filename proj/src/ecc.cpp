#include "wsnac/ecc.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "wsnac/encoding.hpp"
#include "wsnac/errors.hpp"

namespace wsnac::ecc {

namespace {

mpz_class mod(const mpz_class& v, const mpz_class& m) {
    mpz_class r = v % m;
    if (r < 0) r += m;
    return r;
}

bool probably_prime(const mpz_class& v) {
    return mpz_probab_prime_p(v.get_mpz_t(), 40) != 0;
}

Bytes fixed_width_be(const mpz_class& v, size_t width) {
    Bytes out(width, 0);
    size_t count = 0;
    mpz_export(out.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
    if (count > width) throw Error(ErrorCode::MalformedMessage, "integer exceeds field width");
    // mpz_export writes big-endian from the front; shift right-aligned.
    if (count && count < width) {
        std::copy_backward(out.begin(), out.begin() + long(count), out.end());
        std::fill(out.begin(), out.begin() + long(width - count), uint8_t(0));
    }
    return out;
}

mpz_class from_be(ByteView data) {
    mpz_class v;
    if (!data.empty()) mpz_import(v.get_mpz_t(), data.size(), 1, 1, 1, 0, data.data());
    return v;
}

}  // namespace

mpz_class mod_inverse(const mpz_class& x, const mpz_class& m) {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()) == 0) {
        throw Error(ErrorCode::NonInvertibleDifference, x.get_str() + " mod " + m.get_str());
    }
    return r;
}

ValidityReport validate_params(const CurveParams& params) {
    auto fail = [](std::string why) { return ValidityReport{false, std::move(why)}; };
    if (params.p < 2 || !probably_prime(params.p)) return fail("p is not prime");
    if (params.a < 0 || params.a >= params.p) return fail("a out of field range");
    if (params.b < 0 || params.b >= params.p) return fail("b out of field range");
    mpz_class disc = mod(4 * params.a * params.a * params.a + 27 * params.b * params.b, params.p);
    if (disc == 0) return fail("singular curve: 4a^3 + 27b^2 = 0 mod p");
    if (params.g.is_infinity()) return fail("base point is the identity");
    if (!is_on_curve(params.g, params)) return fail("base point not on curve");
    if (params.n < 2 || !probably_prime(params.n)) return fail("n is not prime");
    if (!scalar_mul(params.n, params.g, params).is_infinity()) {
        return fail("n is not the base point order");
    }
    return {};
}

bool is_on_curve(const CurvePoint& pt, const CurveParams& params) {
    if (pt.is_infinity()) return true;
    if (pt.x < 0 || pt.x >= params.p || pt.y < 0 || pt.y >= params.p) return false;
    mpz_class lhs = mod(pt.y * pt.y, params.p);
    mpz_class rhs = mod(pt.x * pt.x * pt.x + params.a * pt.x + params.b, params.p);
    return lhs == rhs;
}

CurvePoint point_negate(const CurvePoint& p, const CurveParams& params) {
    if (p.is_infinity()) return p;
    return CurvePoint::affine(p.x, mod(-p.y, params.p));
}

CurvePoint point_add(const CurvePoint& p, const CurvePoint& q, const CurveParams& params) {
    if (!is_on_curve(p, params) || !is_on_curve(q, params)) {
        throw Error(ErrorCode::PointNotOnCurve);
    }
    if (p.is_infinity()) return q;
    if (q.is_infinity()) return p;
    if (p.x == q.x && mod(p.y + q.y, params.p) == 0) return CurvePoint::infinity();

    mpz_class slope;
    if (p.x == q.x && p.y == q.y) {
        // Tangent; y != 0 here since the inverse case was handled above.
        slope = mod((3 * p.x * p.x + params.a) * mod_inverse(mod(2 * p.y, params.p), params.p),
                    params.p);
    } else {
        slope = mod((q.y - p.y) * mod_inverse(mod(q.x - p.x, params.p), params.p), params.p);
    }
    mpz_class rx = mod(slope * slope - p.x - q.x, params.p);
    mpz_class ry = mod(slope * (p.x - rx) - p.y, params.p);
    return CurvePoint::affine(rx, ry);
}

CurvePoint scalar_mul(const mpz_class& k, const CurvePoint& p, const CurveParams& params) {
    if (!is_on_curve(p, params)) throw Error(ErrorCode::PointNotOnCurve);
    if (k < 0) throw Error(ErrorCode::MalformedMessage, "negative scalar");
    CurvePoint acc = CurvePoint::infinity();
    CurvePoint base = p;
    size_t bits = mpz_sizeinbase(k.get_mpz_t(), 2);
    if (k == 0) return acc;
    for (size_t i = 0; i < bits; ++i) {
        if (mpz_tstbit(k.get_mpz_t(), i)) acc = point_add(acc, base, params);
        if (i + 1 < bits) base = point_add(base, base, params);
    }
    return acc;
}

std::vector<CurvePoint> enumerate_points(const CurveParams& params) {
    if (params.p >= mpz_class(1) << 20) {
        throw Error(ErrorCode::ParamsTooLarge, "enumeration guarded to p < 2^20");
    }
    unsigned long p = params.p.get_ui();
    // Square table: y^2 mod p -> all y producing it.
    std::map<unsigned long, std::vector<unsigned long>> squares;
    for (unsigned long y = 0; y < p; ++y) {
        squares[(y * y) % p].push_back(y);
    }
    std::vector<CurvePoint> points;
    points.push_back(CurvePoint::infinity());
    unsigned long a = params.a.get_ui(), b = params.b.get_ui();
    for (unsigned long x = 0; x < p; ++x) {
        unsigned long rhs = (x * x % p * x + a * x + b) % p;
        auto it = squares.find(rhs);
        if (it == squares.end()) continue;
        for (unsigned long y : it->second) {
            points.push_back(CurvePoint::affine(mpz_class(x), mpz_class(y)));
        }
    }
    return points;
}

Bytes point_encode(const CurvePoint& pt, const CurveParams& params) {
    if (pt.is_infinity()) return Bytes{0x00};
    Bytes out{0x04};
    append(out, fixed_width_be(pt.x, params.field_bytes()));
    append(out, fixed_width_be(pt.y, params.field_bytes()));
    return out;
}

CurvePoint point_decode(ByteView data, const CurveParams& params) {
    if (data.size() == 1 && data[0] == 0x00) return CurvePoint::infinity();
    size_t w = params.field_bytes();
    if (data.size() != 1 + 2 * w || data[0] != 0x04) {
        throw Error(ErrorCode::MalformedMessage, "bad point encoding");
    }
    CurvePoint pt = CurvePoint::affine(from_be(data.subspan(1, w)), from_be(data.subspan(1 + w, w)));
    if (!is_on_curve(pt, params)) throw Error(ErrorCode::PointNotOnCurve);
    return pt;
}

Bytes scalar_encode(const Scalar& s, const CurveParams& params) {
    return fixed_width_be(s.v, params.scalar_bytes());
}

Scalar scalar_decode(ByteView data, const CurveParams& params) {
    if (data.size() != params.scalar_bytes()) {
        throw Error(ErrorCode::MalformedMessage, "bad scalar width");
    }
    mpz_class v = from_be(data);
    if (v >= params.n) throw Error(ErrorCode::MalformedMessage, "scalar out of range");
    return Scalar{v};
}

Bytes x_coordinate_bytes(const CurvePoint& pt, const CurveParams& params) {
    if (pt.is_infinity()) throw Error(ErrorCode::InfinityPoint);
    return fixed_width_be(pt.x, params.field_bytes());
}

SymKey derive_sym_key(const CurvePoint& pt, const CurveParams& params) {
    Bytes x = x_coordinate_bytes(pt, params);
    return SymKey::from_digest(hash(encode_fields({ByteView(x)})));
}

CurveParams toy17() {
    CurveParams c;
    c.name = "toy17";
    c.p = 17;
    c.a = 2;
    c.b = 2;
    c.g = CurvePoint::affine(5, 1);
    c.n = 19;
    return c;
}

CurveParams p160() {
    // SECG secp160r1.
    CurveParams c;
    c.name = "p160";
    c.p = mpz_class("0xffffffffffffffffffffffffffffffff7fffffff");
    c.a = mpz_class("0xffffffffffffffffffffffffffffffff7ffffffc");
    c.b = mpz_class("0x1c97befc54bd7a8b65acf89f81d4d4adc565fa45");
    c.g = CurvePoint::affine(mpz_class("0x4a96b5688ef573284664698968c38bb913cbfc82"),
                             mpz_class("0x23a628553168947d59dcc912042351377ac5fb32"));
    c.n = mpz_class("0x0100000000000000000001f4c8f927aed3ca752257");
    return c;
}

namespace {

mpz_class parse_int(const std::string& text) {
    std::string t = text;
    if (t.starts_with("0x") || t.starts_with("0X")) return mpz_class(t.substr(2), 16);
    return mpz_class(t, 10);
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

CurveParams parse_curve_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto c = line.find('#'); c != std::string::npos) line.resize(c);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ConfigError, "curve file line missing '=': " + line);
        }
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    CurveParams c;
    c.name = kv.count("name") ? kv["name"] : "custom";
    try {
        for (const char* key : {"p", "a", "b", "gx", "gy", "n"}) {
            if (!kv.count(key)) {
                throw Error(ErrorCode::ConfigError, std::string("curve file missing key ") + key);
            }
        }
        c.p = parse_int(kv["p"]);
        c.a = parse_int(kv["a"]);
        c.b = parse_int(kv["b"]);
        c.g = CurvePoint::affine(parse_int(kv["gx"]), parse_int(kv["gy"]));
        c.n = parse_int(kv["n"]);
    } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::ConfigError, "bad integer in curve file");
    }
    return c;
}

std::string curve_to_text(const CurveParams& params) {
    std::ostringstream out;
    out << "name = " << params.name << "\n";
    out << "p = " << params.p.get_str() << "\n";
    out << "a = " << params.a.get_str() << "\n";
    out << "b = " << params.b.get_str() << "\n";
    out << "gx = " << params.g.x.get_str() << "\n";
    out << "gy = " << params.g.y.get_str() << "\n";
    out << "n = " << params.n.get_str() << "\n";
    return out.str();
}

CurveParams load_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open curve file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_curve_text(buf.str());
}

}  // namespace wsnac::ecc
