#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wsnac {

// Every failure the scheme or the harness can signal. Protocol-phase codes
// surface in transcripts as abort events under these exact names.
enum class ErrorCode {
    // crypto_prims / ecc
    FieldTooLong,
    AuthFailure,
    InfinityPoint,
    PointNotOnCurve,
    ParamsTooLarge,
    MalformedMessage,
    // access tree
    UnknownAttribute,
    NonInvertibleDifference,
    // protocol phases
    InvalidParams,
    DuplicateUser,
    BadCredentials,
    UnknownClusterHead,
    UnresolvableKeyLookup,
    MissingStoredSecret,
    UserAuthFailed,
    WrongCluster,
    StaleTimestamp,
    T1Mismatch,
    HashMismatch,
    StaleReply,
    ExpiredClusterHead,
    AccessDenied,
    // harness
    ConfigError,
    IndexOutOfRange,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(error_code_name(code)) +
                             (detail.empty() ? "" : ": " + detail)),
          code_(code) {}

    explicit Error(ErrorCode code) : Error(code, "") {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace wsnac
