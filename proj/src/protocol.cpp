#include "wsnac/protocol.hpp"

#include <algorithm>

namespace wsnac::proto {

namespace {

const std::array<uint8_t, 8> kZeroMask{};

Digest digest_from_bytes(const Bytes& b) {
    if (b.size() != kDigestSize) throw Error(ErrorCode::MalformedMessage, "bad digest width");
    Digest d;
    std::copy(b.begin(), b.end(), d.bytes.begin());
    return d;
}

std::array<uint8_t, 8> eight_from_bytes(const Bytes& b) {
    if (b.size() != 8) throw Error(ErrorCode::MalformedMessage, "bad 8-byte field");
    std::array<uint8_t, 8> r;
    std::copy(b.begin(), b.end(), r.begin());
    return r;
}

Digest session_mask(const Timestamp& tsu, const std::array<uint8_t, 8>& ch_mask) {
    // S = h(TSU || (T_CH xor W_CH))
    return hash(encode_fields({ByteView(tsu.encode()), ByteView(ch_mask)}));
}

Digest login_check_value(const Digest& r, const Timestamp& tu, ByteView n_x) {
    // M = h(R || TU || N_x)
    return hash(encode_fields({r.view(), ByteView(tu.encode()), n_x}));
}

Digest t1_value(const Timestamp& tu, const Timestamp& t_bs) {
    return hash(encode_fields({ByteView(tu.encode()), ByteView(t_bs.encode())}));
}

Digest reply_session_digest(const ClusterId& cid, const Bytes& user_id, const Timestamp& tu,
                            ByteView n_x, const Timestamp& ts_ch) {
    // K_iu = h(CID || ID || TU || N_x || TS_CH)
    return hash(encode_fields(
        {ByteView(to_bytes(cid)), ByteView(user_id), ByteView(tu.encode()), n_x,
         ByteView(ts_ch.encode())}));
}

SymKey data_key(const Digest& k_iu, const ecc::CurvePoint& k3, const ecc::CurveParams& params) {
    // K_si = h(K_iu || K3)
    Bytes k3_bytes = ecc::point_encode(k3, params);
    return SymKey::from_digest(hash(encode_fields({k_iu.view(), ByteView(k3_bytes)})));
}

Digest reply_check_digest(const Bytes& user_id, const ClusterId& cid, const Timestamp& ts_ch,
                          const AuthCiphertext& m1) {
    Bytes m1_bytes = m1.to_bytes();
    return hash(encode_fields({ByteView(user_id), ByteView(to_bytes(cid)),
                               ByteView(ts_ch.encode()), ByteView(m1_bytes)}));
}

void check_identity_size(const Bytes& value, const char* what) {
    if (value.size() > kMaxIdentityBytes) {
        throw Error(ErrorCode::ConfigError, std::string(what) + " exceeds 64 bytes");
    }
}

}  // namespace

Deployment predeploy(const ecc::CurveParams& params, const std::vector<ClusterSpec>& clusters,
                     size_t m_prime, const std::vector<abe::AttributeId>& universe,
                     const LogicalClock& clock, DetRng& rng, const Defects& defects,
                     uint64_t ch_lifetime) {
    auto report = ecc::validate_params(params);
    if (!report.ok) throw Error(ErrorCode::InvalidParams, report.violation);
    std::set<abe::AttributeId> known(universe.begin(), universe.end());
    for (const ClusterSpec& spec : clusters) {
        for (const auto& attr : spec.attrs) {
            if (!known.count(attr)) throw Error(ErrorCode::UnknownAttribute, attr);
        }
    }

    Deployment d;
    d.bs.params = params;
    d.bs.defects = defects;
    d.bs.universe = universe;
    d.bs.x = ecc::random_scalar(rng, params);
    d.bs.x_point = ecc::scalar_mul(d.bs.x, params.g, params);
    d.bs.attribute_master = abe::make_attribute_master(universe, params, rng);

    Timestamp boot = clock.now();
    for (const ClusterSpec& spec : clusters) {
        if (d.bs.clusters.count(spec.cid)) {
            throw Error(ErrorCode::ConfigError, "duplicate cluster id " + spec.cid);
        }
        ClusterRecord rec;
        auto mk = rng.bytes(32);
        std::copy(mk.begin(), mk.end(), rec.master_key.bytes.begin());
        auto ku = rng.bytes(32);
        std::copy(ku.begin(), ku.end(), rec.k_u.bytes.begin());
        rec.b = ecc::random_scalar(rng, params);
        rec.b_point = ecc::scalar_mul(rec.b, params.g, params);
        rec.t_ch = boot;
        rec.w_ch = Timestamp{boot.ticks + ch_lifetime};
        rec.attrs = spec.attrs;

        ClusterHeadState ch;
        ch.cid = spec.cid;
        ch.attrs = spec.attrs;
        ch.master_key = rec.master_key;
        ch.k_u = rec.k_u;
        ch.b_point = rec.b_point;
        for (const auto& attr : spec.attrs) {
            ch.t_points[attr] = d.bs.attribute_master.points.at(attr);
        }
        ch.t_ch = rec.t_ch;
        ch.w_ch = rec.w_ch;
        ch.params = params;
        ch.defects = defects;

        d.bs.clusters.emplace(spec.cid, std::move(rec));
        d.cluster_heads.push_back(std::move(ch));
    }

    for (size_t i = 0; i < m_prime; ++i) {
        ReservedClusterId res;
        res.cid = "CHR" + std::to_string(i + 1);
        auto mk = rng.bytes(32);
        std::copy(mk.begin(), mk.end(), res.master_key.bytes.begin());
        d.bs.reserved.push_back(std::move(res));
    }

    for (const ClusterSpec& spec : clusters) {
        SensorNodeState sensor;
        sensor.sid = "S-" + spec.cid;
        sensor.attrs = spec.attrs;
        auto mk = rng.bytes(32);
        std::copy(mk.begin(), mk.end(), sensor.master_key.bytes.begin());
        d.sensors.push_back(std::move(sensor));
    }
    return d;
}

ClientRegistration register_client(const Bytes& id, const Bytes& password, DetRng& rng) {
    check_identity_size(id, "identity");
    check_identity_size(password, "password");
    ClientRegistration reg;
    reg.r = rng.bytes(16);
    reg.request.id = id;
    reg.request.rpw =
        hash(encode_fields({ByteView(id), ByteView(reg.r), ByteView(password)}));
    return reg;
}

IssuedCard register_bs(BaseStationState& bs, const RegistrationRequest& request,
                       const abe::AccessTree& tree, const LogicalClock& clock, DetRng& rng) {
    check_identity_size(request.id, "identity");
    if (bs.registered_ids.count(request.id)) {
        throw Error(ErrorCode::DuplicateUser, to_string(ByteView(request.id)));
    }
    std::set<abe::AttributeId> known(bs.universe.begin(), bs.universe.end());
    abe::validate_tree(tree, &known);

    Timestamp tsu = clock.now();
    Digest a = hash(encode_fields({ByteView(request.id), ByteView(tsu.encode())}));
    Digest r = hash(encode_fields({request.rpw.view(), a.view()}));
    ecc::Scalar y = ecc::random_scalar(rng, bs.params);
    ecc::CurvePoint y_point = ecc::scalar_mul(y, bs.params.g, bs.params);

    abe::PolyAssignment assignment = assign_polynomials(tree, y, bs.params.n, rng);
    abe::LeafKeyMap keys = abe::leaf_keys(tree, assignment, bs.attribute_master, bs.params.n);

    IssuedCard issued;
    issued.card.g = bs.params.g;
    issued.card.tsu = tsu;
    issued.card.tree = tree;
    issued.card.r_digest = r;
    issued.card.leaf_keys = std::move(keys);
    issued.card.y_point = y_point;

    uint64_t before = hash_op_count();
    for (const auto& [cid, rec] : bs.clusters) {
        issued.card.key_id_pairs.emplace_back(
            session_mask(tsu, xor8(rec.t_ch.encode(), rec.w_ch.encode())), cid);
    }
    for (const ReservedClusterId& res : bs.reserved) {
        // Future cluster heads have no bootstrap/expiration times yet.
        issued.card.key_id_pairs.emplace_back(session_mask(tsu, kZeroMask), res.cid);
    }
    issued.siu_hash_ops = hash_op_count() - before;

    bs.registered_ids.insert(request.id);
    if (bs.defects.d2_stored_secrets) {
        bs.users.emplace(request.id, UserRecord{y, r, tsu, tree});
    }
    return issued;
}

std::pair<LoginRequest, UserSession> login(const SmartCard& card, const Bytes& id,
                                           const Bytes& password, const ClusterId& target,
                                           const LogicalClock& clock, DetRng& rng,
                                           const ecc::CurveParams& params) {
    check_identity_size(id, "identity");
    check_identity_size(password, "password");
    Digest rpw = hash(encode_fields({ByteView(id), ByteView(card.r), ByteView(password)}));
    Digest a = hash(encode_fields({ByteView(id), ByteView(card.tsu.encode())}));
    Digest r = hash(encode_fields({rpw.view(), a.view()}));
    if (r != card.r_digest) {
        throw Error(ErrorCode::BadCredentials, "credential check failed");
    }

    const Digest* mask = nullptr;
    for (const auto& [s, cid] : card.key_id_pairs) {
        if (cid == target) {
            mask = &s;
            break;
        }
    }
    if (!mask) throw Error(ErrorCode::UnknownClusterHead, target);

    UserSession session;
    session.user_id = id;
    session.n = ecc::random_scalar(rng, params);
    session.n_point = ecc::scalar_mul(session.n, card.g, params);
    session.session_key_point = ecc::scalar_mul(session.n, card.y_point, params);
    session.tu = clock.now();
    session.target = target;

    Bytes n_x = ecc::x_coordinate_bytes(session.n_point, params);
    Digest m = login_check_value(r, session.tu, ByteView(n_x));
    auto t_iu = xor_mask(session.tu, *mask);

    Bytes plaintext = encode_fields(
        {ByteView(id), ByteView(to_bytes(target)), ByteView(t_iu), m.view()});
    SymKey key = ecc::derive_sym_key(session.session_key_point, params);
    LoginRequest request{session.n_point, sym_encrypt(key, rng.nonce(), ByteView(plaintext))};
    return {std::move(request), std::move(session)};
}

BsAuthResult bs_authenticate(const BaseStationState& bs, const LoginRequest& request,
                             const LogicalClock& clock, DetRng& rng) {
    if (!bs.defects.d1_user_lookup) {
        throw Error(ErrorCode::UnresolvableKeyLookup,
                    "request carries no user identifier outside the ciphertext");
    }
    if (!bs.defects.d2_stored_secrets) {
        throw Error(ErrorCode::MissingStoredSecret,
                    "no per-user y or R was stored at registration");
    }
    if (request.n_point.is_infinity()) {
        throw Error(ErrorCode::MalformedMessage, "identity point in login request");
    }

    BsAuthResult result;
    const UserRecord* record = nullptr;
    std::vector<Bytes> fields;
    for (const auto& [id, rec] : bs.users) {
        ++result.trial_decryptions;
        ecc::CurvePoint sk = ecc::scalar_mul(rec.y, request.n_point, bs.params);
        SymKey key = ecc::derive_sym_key(sk, bs.params);
        try {
            Bytes plain = sym_decrypt(key, request.enc);
            fields = decode_fields(ByteView(plain));
        } catch (const Error&) {
            continue;
        }
        if (fields.size() == 4 && fields[0] == id) {
            record = &rec;
            result.user_id = id;
            break;
        }
    }
    if (!record) {
        throw Error(ErrorCode::UserAuthFailed, "no registered key decrypts the request");
    }

    const ClusterId cid = to_string(ByteView(fields[1]));
    auto cluster = bs.clusters.find(cid);
    if (cluster == bs.clusters.end()) throw Error(ErrorCode::UnknownClusterHead, cid);

    auto t_iu = eight_from_bytes(fields[2]);
    Digest m_received = digest_from_bytes(fields[3]);

    Digest s = session_mask(record->tsu,
                            xor8(cluster->second.t_ch.encode(), cluster->second.w_ch.encode()));
    Timestamp tu = unmask_timestamp(t_iu, s);
    Bytes n_x = ecc::x_coordinate_bytes(request.n_point, bs.params);
    if (login_check_value(record->r, tu, ByteView(n_x)) != m_received) {
        throw Error(ErrorCode::UserAuthFailed, "login check value mismatch");
    }

    Timestamp t_bs = clock.now();
    Digest t1 = t1_value(tu, t_bs);
    ecc::CurvePoint y_point = ecc::scalar_mul(record->y, bs.params.g, bs.params);
    Bytes plaintext = encode_fields(
        {ByteView(result.user_id), ByteView(to_bytes(cid)), ByteView(t_iu),
         ByteView(t_bs.encode()), ByteView(ecc::point_encode(request.n_point, bs.params)),
         t1.view(), ByteView(ecc::point_encode(y_point, bs.params)),
         ByteView(record->tsu.encode())});
    result.forward.enc =
        sym_encrypt(cluster->second.master_key, rng.nonce(), ByteView(plaintext));
    result.cid = cid;
    return result;
}

VerifiedSession ch_verify(const ClusterHeadState& ch, const AuthForward& forward,
                          const LogicalClock& clock, uint64_t delta_t) {
    Bytes plain = sym_decrypt(ch.master_key, forward.enc);
    auto fields = decode_fields(ByteView(plain));
    if (fields.size() != 8) throw Error(ErrorCode::MalformedMessage, "bad forward layout");

    VerifiedSession session;
    session.user_id = fields[0];
    const ClusterId cid = to_string(ByteView(fields[1]));
    if (cid != ch.cid) throw Error(ErrorCode::WrongCluster, cid);

    auto t_iu = eight_from_bytes(fields[2]);
    Timestamp t_bs = Timestamp::decode(eight_from_bytes(fields[3]));
    session.n_point = ecc::point_decode(ByteView(fields[4]), ch.params);
    Digest t1 = digest_from_bytes(fields[5]);
    session.y_point = ecc::point_decode(ByteView(fields[6]), ch.params);
    Timestamp tsu = Timestamp::decode(eight_from_bytes(fields[7]));

    uint64_t now = clock.now().ticks;
    uint64_t delay = now >= t_bs.ticks ? now - t_bs.ticks : t_bs.ticks - now;
    if (delay >= delta_t) throw Error(ErrorCode::StaleTimestamp, "transmission delay exceeded");

    Digest s = session_mask(tsu, xor8(ch.t_ch.encode(), ch.w_ch.encode()));
    if (ch.defects.d3_unmask_fix) {
        session.tu = unmask_timestamp(t_iu, s);
    } else {
        // As written: XOR with the bootstrap timestamp, which does not invert
        // the login-side mask.
        session.tu = Timestamp::decode(xor8(t_iu, ch.t_ch.encode()));
    }
    if (t1_value(session.tu, t_bs) != t1) {
        throw Error(ErrorCode::T1Mismatch, "recovered login time does not authenticate");
    }
    return session;
}

AuthReply ch_encrypt_reply(const ClusterHeadState& ch, const VerifiedSession& session,
                           ByteView sensor_data, const LogicalClock& clock, DetRng& rng) {
    if (sensor_data.size() > kMaxSensorDataBytes) {
        throw Error(ErrorCode::ConfigError, "sensor data exceeds 64 KiB");
    }
    AuthReply reply;
    ecc::CurvePoint k3 = ecc::point_add(ch.b_point, session.y_point, ch.params);
    for (const auto& attr : ch.attrs) {
        reply.k2[attr] = ecc::point_add(ch.b_point, ch.t_points.at(attr), ch.params);
    }
    reply.ts_ch = clock.now();
    reply.t_ch = ch.t_ch;
    reply.masked = xor8(ch.t_ch.encode(), ch.w_ch.encode());

    Bytes n_x = ecc::x_coordinate_bytes(session.n_point, ch.params);
    Digest k_iu =
        reply_session_digest(ch.cid, session.user_id, session.tu, ByteView(n_x), reply.ts_ch);
    SymKey k_si = data_key(k_iu, k3, ch.params);
    reply.m1 = sym_encrypt(k_si, rng.nonce(), sensor_data);
    reply.check = reply_check_digest(session.user_id, ch.cid, reply.ts_ch, reply.m1);
    return reply;
}

Bytes user_decrypt(const SmartCard& card, const UserSession& session, const AuthReply& reply,
                   const LogicalClock& clock, uint64_t delta_t,
                   const ecc::CurveParams& params) {
    if (reply_check_digest(session.user_id, session.target, reply.ts_ch, reply.m1) !=
        reply.check) {
        throw Error(ErrorCode::HashMismatch, "reply digest mismatch");
    }
    uint64_t now = clock.now().ticks;
    uint64_t delay = now >= reply.ts_ch.ticks ? now - reply.ts_ch.ticks : reply.ts_ch.ticks - now;
    if (delay >= delta_t) throw Error(ErrorCode::StaleReply, "reply delay exceeded");

    Timestamp w_ch = Timestamp::decode(xor8(reply.masked, reply.t_ch.encode()));
    if (!(w_ch > reply.t_ch)) {
        throw Error(ErrorCode::ExpiredClusterHead, "expiration not after bootstrap");
    }

    std::set<abe::AttributeId> offered;
    for (const auto& [attr, _] : reply.k2) offered.insert(attr);

    std::map<abe::NodeId, ecc::CurvePoint> inputs;
    for (const auto& [leaf, attr] : abe::leaf_attributes(card.tree)) {
        auto k2 = reply.k2.find(attr);
        if (k2 == reply.k2.end()) continue;
        ecc::CurvePoint share =
            ecc::scalar_mul(card.leaf_keys.keys.at(leaf), card.g, params);
        inputs.emplace(leaf, ecc::point_add(share, k2->second, params));
    }

    auto k3 = abe::access_reconstruct(card.tree, inputs, offered, params);
    if (!k3) throw Error(ErrorCode::AccessDenied, "attributes do not satisfy the access tree");

    Bytes n_x = ecc::x_coordinate_bytes(session.n_point, params);
    Digest k_iu = reply_session_digest(session.target, session.user_id, session.tu,
                                       ByteView(n_x), reply.ts_ch);
    SymKey k_si = data_key(k_iu, *k3, params);
    return sym_decrypt(k_si, reply.m1);
}

// ---------------------------------------------------------------------------
// Wire formats. One discriminator byte, then length-prefixed fields.

namespace {
constexpr uint8_t kTagLoginRequest = 0x01;
constexpr uint8_t kTagAuthForward = 0x02;
constexpr uint8_t kTagAuthReply = 0x03;

ByteView strip_tag(ByteView data, uint8_t expected) {
    if (data.empty() || data[0] != expected) {
        throw Error(ErrorCode::MalformedMessage, "wrong message discriminator");
    }
    return data.subspan(1);
}
}  // namespace

Bytes LoginRequest::to_bytes(const ecc::CurveParams& params) const {
    Bytes out{kTagLoginRequest};
    Bytes n_bytes = ecc::point_encode(n_point, params);
    append(out, encode_fields({ByteView(n_bytes), ByteView(enc.to_bytes())}));
    return out;
}

LoginRequest LoginRequest::from_bytes(ByteView data, const ecc::CurveParams& params) {
    auto fields = decode_fields(strip_tag(data, kTagLoginRequest));
    if (fields.size() != 2) throw Error(ErrorCode::MalformedMessage, "bad login request");
    LoginRequest req;
    req.n_point = ecc::point_decode(ByteView(fields[0]), params);
    if (req.n_point.is_infinity()) {
        throw Error(ErrorCode::MalformedMessage, "identity point in login request");
    }
    req.enc = AuthCiphertext::from_bytes(ByteView(fields[1]));
    return req;
}

Bytes AuthForward::to_bytes() const {
    Bytes out{kTagAuthForward};
    append(out, encode_fields({ByteView(enc.to_bytes())}));
    return out;
}

AuthForward AuthForward::from_bytes(ByteView data) {
    auto fields = decode_fields(strip_tag(data, kTagAuthForward));
    if (fields.size() != 1) throw Error(ErrorCode::MalformedMessage, "bad forward");
    return AuthForward{AuthCiphertext::from_bytes(ByteView(fields[0]))};
}

Bytes AuthReply::to_bytes(const ecc::CurveParams& params) const {
    Bytes k2_flat;
    {
        std::vector<Bytes> entries;
        for (const auto& [attr, point] : k2) {
            entries.push_back(wsnac::to_bytes(attr));
            entries.push_back(ecc::point_encode(point, params));
        }
        k2_flat = encode_fields(std::span<const Bytes>(entries));
    }
    Bytes out{kTagAuthReply};
    append(out, encode_fields({ByteView(m1.to_bytes()), ByteView(ts_ch.encode()),
                               ByteView(masked), ByteView(t_ch.encode()), check.view(),
                               ByteView(k2_flat)}));
    return out;
}

AuthReply AuthReply::from_bytes(ByteView data, const ecc::CurveParams& params) {
    auto fields = decode_fields(strip_tag(data, kTagAuthReply));
    if (fields.size() != 6) throw Error(ErrorCode::MalformedMessage, "bad reply layout");
    AuthReply reply;
    reply.m1 = AuthCiphertext::from_bytes(ByteView(fields[0]));
    reply.ts_ch = Timestamp::decode(eight_from_bytes(fields[1]));
    reply.masked = eight_from_bytes(fields[2]);
    reply.t_ch = Timestamp::decode(eight_from_bytes(fields[3]));
    reply.check = digest_from_bytes(fields[4]);
    auto entries = decode_fields(ByteView(fields[5]));
    if (entries.size() % 2) throw Error(ErrorCode::MalformedMessage, "odd k2 list");
    for (size_t i = 0; i < entries.size(); i += 2) {
        reply.k2[to_string(ByteView(entries[i]))] =
            ecc::point_decode(ByteView(entries[i + 1]), params);
    }
    return reply;
}

}  // namespace wsnac::proto
