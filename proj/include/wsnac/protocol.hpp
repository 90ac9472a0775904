#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "wsnac/access_tree.hpp"
#include "wsnac/ecc.hpp"
#include "wsnac/encoding.hpp"
#include "wsnac/errors.hpp"
#include "wsnac/rng.hpp"
#include "wsnac/symcipher.hpp"
#include "wsnac/timestamp.hpp"

namespace wsnac::proto {

using ClusterId = std::string;

// The scheme as written cannot execute end to end; each flag applies the
// minimal repair for one defect. All false = strict mode (faithful to the
// original, aborts where it is stuck); all true = patched mode.
struct Defects {
    bool d1_user_lookup = false;    // BS identifies the requesting user by trial decryption
    bool d2_stored_secrets = false; // BS keeps {y_i, R_i, TSU_i, P_i} per user at registration
    bool d3_unmask_fix = false;     // CH unmasks T_iu with S_iu instead of T_CHu

    static Defects strict() { return {}; }
    static Defects patched() { return {true, true, true}; }
};

struct ClusterRecord {
    SymKey master_key;
    ecc::Scalar b;          // secret behind B
    ecc::CurvePoint b_point;
    SymKey k_u;             // pre-loaded "secret key K_u"; no phase ever reads it
    Timestamp t_ch;         // bootstrap timestamp
    Timestamp w_ch;         // expiration, > t_ch
    std::vector<abe::AttributeId> attrs;
};

struct ReservedClusterId {
    ClusterId cid;
    SymKey master_key;
};

struct UserRecord {
    ecc::Scalar y;
    Digest r;
    Timestamp tsu;
    abe::AccessTree tree;
};

struct BaseStationState {
    ecc::CurveParams params;
    ecc::Scalar x;        // BS private key
    ecc::CurvePoint x_point;  // X = x*G; created in pre-deployment, used by no later phase
    abe::AttributeMaster attribute_master;
    std::vector<abe::AttributeId> universe;
    std::map<ClusterId, ClusterRecord> clusters;
    std::vector<ReservedClusterId> reserved;
    std::map<Bytes, UserRecord> users;  // populated only when defects.d2_stored_secrets
    std::set<Bytes> registered_ids;     // duplicate-registration bookkeeping, all modes
    Defects defects;
};

struct ClusterHeadState {
    ClusterId cid;
    std::vector<abe::AttributeId> attrs;
    SymKey master_key;
    SymKey k_u;
    ecc::CurvePoint b_point;
    std::map<abe::AttributeId, ecc::CurvePoint> t_points;  // T per owned attribute
    Timestamp t_ch;
    Timestamp w_ch;
    ecc::CurveParams params;
    Defects defects;
};

struct SensorNodeState {
    std::string sid;
    std::vector<abe::AttributeId> attrs;
    SymKey master_key;
};

// The issued token, exactly the provisioning payload plus the user-held
// random r (inserted by the owner after issuance).
struct SmartCard {
    ecc::CurvePoint g;
    Timestamp tsu;
    abe::AccessTree tree;
    Digest r_digest;  // the card's "RU_i" slot; holds R_i (no other definition exists)
    abe::LeafKeyMap leaf_keys;
    ecc::CurvePoint y_point;
    std::string hash_alg = kHashAlgorithm;
    std::vector<std::pair<Digest, ClusterId>> key_id_pairs;  // (S, CID), m + m' entries
    Bytes r;
};

struct LoginRequest {
    ecc::CurvePoint n_point;
    AuthCiphertext enc;  // of encode([ID, CID, T_iu, M]) under the session point key

    Bytes to_bytes(const ecc::CurveParams& params) const;
    static LoginRequest from_bytes(ByteView data, const ecc::CurveParams& params);
};

struct AuthForward {
    AuthCiphertext enc;  // of encode([ID, CID, T_iu, T_BS, N, T1, Y, TSU]) under MK of the CH

    Bytes to_bytes() const;
    static AuthForward from_bytes(ByteView data);
};

struct AuthReply {
    AuthCiphertext m1;
    Timestamp ts_ch;
    std::array<uint8_t, 8> masked{};  // T_CH xor W_CH
    Timestamp t_ch;
    Digest check;  // h(ID || CID || TS_CH || M1)
    std::map<abe::AttributeId, ecc::CurvePoint> k2;  // B + T per owned attribute

    Bytes to_bytes(const ecc::CurveParams& params) const;
    static AuthReply from_bytes(ByteView data, const ecc::CurveParams& params);
};

struct UserSession {
    Bytes user_id;
    ecc::Scalar n;
    ecc::CurvePoint n_point;
    ecc::CurvePoint session_key_point;  // n * Y
    Timestamp tu;
    ClusterId target;
};

struct ClusterSpec {
    ClusterId cid;
    std::vector<abe::AttributeId> attrs;
};

struct Deployment {
    BaseStationState bs;
    std::vector<ClusterHeadState> cluster_heads;
    std::vector<SensorNodeState> sensors;
};

inline constexpr uint64_t kDefaultChLifetime = 1000;
inline constexpr size_t kMaxIdentityBytes = 64;
inline constexpr size_t kMaxSensorDataBytes = 64 * 1024;

// Pre-deployment. Draw order from rng: BS secret x; one t per universe
// attribute; per deployed CH its master key, K_u, and b; per reserved id its
// master key; per sensor node its master key. Reserved ids are named
// "<cid_prefix>R<k>". One sensor node is provisioned per cluster head,
// inheriting its attribute set (their runtime behavior is out of scope; the
// state is stored and nothing more).
Deployment predeploy(const ecc::CurveParams& params, const std::vector<ClusterSpec>& clusters,
                     size_t m_prime, const std::vector<abe::AttributeId>& universe,
                     const LogicalClock& clock, DetRng& rng, const Defects& defects,
                     uint64_t ch_lifetime = kDefaultChLifetime);

struct RegistrationRequest {
    Digest rpw;  // h(ID || r || PW)
    Bytes id;
};

struct ClientRegistration {
    RegistrationRequest request;
    Bytes r;  // 16 bytes, kept by the user, inserted into the card later
};

ClientRegistration register_client(const Bytes& id, const Bytes& password, DetRng& rng);

struct IssuedCard {
    SmartCard card;            // without r; the owner inserts it
    uint64_t siu_hash_ops = 0; // hash evaluations spent on the (S, CID) pair list
};

// Registration at the BS. Computes R, the user key pair (y, Y), the access
// tree share polynomials and leaf keys, and one (S, CID) pair per deployed
// and reserved cluster id. Reserved pairs use a zeroed timestamp mask since
// future cluster heads have no bootstrap times yet. Stores the user record
// only when defects.d2_stored_secrets.
IssuedCard register_bs(BaseStationState& bs, const RegistrationRequest& request,
                       const abe::AccessTree& tree, const LogicalClock& clock, DetRng& rng);

// Card-side login. Recomputes R from the entered credentials and aborts with
// BadCredentials on mismatch before emitting anything.
std::pair<LoginRequest, UserSession> login(const SmartCard& card, const Bytes& id,
                                           const Bytes& password, const ClusterId& target,
                                           const LogicalClock& clock, DetRng& rng,
                                           const ecc::CurveParams& params);

struct BsAuthResult {
    AuthForward forward;
    ClusterId cid;             // destination cluster head
    Bytes user_id;             // identified requester
    uint64_t trial_decryptions = 0;  // scalar-mul+decrypt attempts spent identifying them
};

// Authentication at the BS. Strict mode aborts before any cryptographic
// work: the request carries no user identifier outside the ciphertext
// (UnresolvableKeyLookup), and without stored secrets there is no y or R to
// authenticate against (MissingStoredSecret). Patched mode identifies the
// user by trial decryption over every registered record.
BsAuthResult bs_authenticate(const BaseStationState& bs, const LoginRequest& request,
                             const LogicalClock& clock, DetRng& rng);

struct VerifiedSession {
    Bytes user_id;
    Timestamp tu;   // recovered login timestamp
    ecc::CurvePoint n_point;
    ecc::CurvePoint y_point;
};

// Forward verification at the CH: master-key decryption, cluster identity,
// transmission delay, and the T1 check. With d3_unmask_fix the login
// timestamp is recovered with the S mask (the only mask that inverts the
// login equation); strict mode XORs with T_CH as written and the T1 check
// then fails on every honest session.
VerifiedSession ch_verify(const ClusterHeadState& ch, const AuthForward& forward,
                          const LogicalClock& clock, uint64_t delta_t);

AuthReply ch_encrypt_reply(const ClusterHeadState& ch, const VerifiedSession& session,
                           ByteView sensor_data, const LogicalClock& clock, DetRng& rng);

// Data decryption at the user: reply integrity and freshness, cluster-head
// expiration, access-tree reconstruction of the shared point, and the final
// authenticated decryption.
Bytes user_decrypt(const SmartCard& card, const UserSession& session, const AuthReply& reply,
                   const LogicalClock& clock, uint64_t delta_t, const ecc::CurveParams& params);

}  // namespace wsnac::proto
