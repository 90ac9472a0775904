#include "wsnac/hash.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <stdexcept>

#include "wsnac/errors.hpp"

namespace wsnac {

namespace {
std::atomic<uint64_t> g_hash_ops{0};
}

Digest hash(ByteView data) {
    Digest out;
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.bytes.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != kDigestSize) {
        throw std::runtime_error("sha256 digest failed");
    }
    g_hash_ops.fetch_add(1, std::memory_order_relaxed);
    return out;
}

uint64_t hash_op_count() { return g_hash_ops.load(std::memory_order_relaxed); }

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::FieldTooLong: return "FieldTooLong";
        case ErrorCode::AuthFailure: return "AuthFailure";
        case ErrorCode::InfinityPoint: return "InfinityPoint";
        case ErrorCode::PointNotOnCurve: return "PointNotOnCurve";
        case ErrorCode::ParamsTooLarge: return "ParamsTooLarge";
        case ErrorCode::MalformedMessage: return "MalformedMessage";
        case ErrorCode::UnknownAttribute: return "UnknownAttribute";
        case ErrorCode::NonInvertibleDifference: return "NonInvertibleDifference";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::DuplicateUser: return "DuplicateUser";
        case ErrorCode::BadCredentials: return "BadCredentials";
        case ErrorCode::UnknownClusterHead: return "UnknownClusterHead";
        case ErrorCode::UnresolvableKeyLookup: return "UnresolvableKeyLookup";
        case ErrorCode::MissingStoredSecret: return "MissingStoredSecret";
        case ErrorCode::UserAuthFailed: return "UserAuthFailed";
        case ErrorCode::WrongCluster: return "WrongCluster";
        case ErrorCode::StaleTimestamp: return "StaleTimestamp";
        case ErrorCode::T1Mismatch: return "T1Mismatch";
        case ErrorCode::HashMismatch: return "HashMismatch";
        case ErrorCode::StaleReply: return "StaleReply";
        case ErrorCode::ExpiredClusterHead: return "ExpiredClusterHead";
        case ErrorCode::AccessDenied: return "AccessDenied";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    }
    return "UnknownError";
}

}  // namespace wsnac
