#include "wsnac/serialize.hpp"

#include <nlohmann/json.hpp>

namespace wsnac::serialize {

using nlohmann::json;

namespace {

std::string mpz_str(const mpz_class& v) { return v.get_str(); }
mpz_class mpz_parse(const json& j) { return mpz_class(j.get<std::string>()); }

std::string hex32(const std::array<uint8_t, 32>& a) { return hex_encode(ByteView(a)); }

template <size_t N>
std::array<uint8_t, N> fixed_from_hex(const json& j) {
    Bytes b = hex_decode(j.get<std::string>());
    if (b.size() != N) throw Error(ErrorCode::ConfigError, "bad fixed-width hex field");
    std::array<uint8_t, N> out;
    std::copy(b.begin(), b.end(), out.begin());
    return out;
}

json scalar_to_json(const ecc::Scalar& s) { return mpz_str(s.v); }
ecc::Scalar scalar_from_json(const json& j) { return ecc::Scalar{mpz_parse(j)}; }

json symkey_to_json(const SymKey& k) { return hex32(k.bytes); }
SymKey symkey_from_json(const json& j) { return SymKey{fixed_from_hex<32>(j)}; }

json digest_to_json(const Digest& d) { return hex32(d.bytes); }
Digest digest_from_json(const json& j) { return Digest{fixed_from_hex<32>(j)}; }

json curve_to_json(const ecc::CurveParams& c) {
    return json{{"name", c.name},     {"p", mpz_str(c.p)},     {"a", mpz_str(c.a)},
                {"b", mpz_str(c.b)},  {"gx", mpz_str(c.g.x)},  {"gy", mpz_str(c.g.y)},
                {"n", mpz_str(c.n)}};
}

ecc::CurveParams curve_from_json(const json& j) {
    ecc::CurveParams c;
    c.name = j.at("name").get<std::string>();
    c.p = mpz_parse(j.at("p"));
    c.a = mpz_parse(j.at("a"));
    c.b = mpz_parse(j.at("b"));
    c.g = ecc::CurvePoint::affine(mpz_parse(j.at("gx")), mpz_parse(j.at("gy")));
    c.n = mpz_parse(j.at("n"));
    return c;
}

json defects_to_json(const proto::Defects& d) {
    json patched = json::array();
    if (d.d1_user_lookup) patched.push_back("D1");
    if (d.d2_stored_secrets) patched.push_back("D2");
    if (d.d3_unmask_fix) patched.push_back("D3");
    return patched;
}

proto::Defects defects_from_json(const json& j) {
    proto::Defects d;
    for (const auto& e : j) {
        std::string name = e.get<std::string>();
        if (name == "D1") d.d1_user_lookup = true;
        else if (name == "D2") d.d2_stored_secrets = true;
        else if (name == "D3") d.d3_unmask_fix = true;
        else throw Error(ErrorCode::ConfigError, "unknown defect " + name);
    }
    return d;
}

}  // namespace

json point_to_json(const ecc::CurvePoint& p) {
    if (p.is_infinity()) return json{{"inf", true}};
    return json{{"x", mpz_str(p.x)}, {"y", mpz_str(p.y)}};
}

ecc::CurvePoint point_from_json(const json& j) {
    if (j.contains("inf") && j.at("inf").get<bool>()) return ecc::CurvePoint::infinity();
    return ecc::CurvePoint::affine(mpz_parse(j.at("x")), mpz_parse(j.at("y")));
}

json deployment_to_json(const proto::Deployment& d) {
    const auto& bs = d.bs;
    json clusters = json::object();
    for (const auto& [cid, rec] : bs.clusters) {
        clusters[cid] = json{{"master_key", symkey_to_json(rec.master_key)},
                             {"b", scalar_to_json(rec.b)},
                             {"B", point_to_json(rec.b_point)},
                             {"K_u", symkey_to_json(rec.k_u)},
                             {"t_ch", rec.t_ch.ticks},
                             {"w_ch", rec.w_ch.ticks},
                             {"attrs", rec.attrs}};
    }
    json reserved = json::array();
    for (const auto& res : bs.reserved) {
        reserved.push_back(json{{"cid", res.cid}, {"master_key", symkey_to_json(res.master_key)}});
    }
    json master = json::object();
    for (const auto& [attr, t] : bs.attribute_master.secrets) {
        master[attr] = json{{"t", scalar_to_json(t)},
                            {"T", point_to_json(bs.attribute_master.points.at(attr))}};
    }
    json chs = json::array();
    for (const auto& ch : d.cluster_heads) {
        json t_points = json::object();
        for (const auto& [attr, pt] : ch.t_points) t_points[attr] = point_to_json(pt);
        chs.push_back(json{{"cid", ch.cid},
                           {"attrs", ch.attrs},
                           {"master_key", symkey_to_json(ch.master_key)},
                           {"K_u", symkey_to_json(ch.k_u)},
                           {"B", point_to_json(ch.b_point)},
                           {"T", std::move(t_points)},
                           {"t_ch", ch.t_ch.ticks},
                           {"w_ch", ch.w_ch.ticks}});
    }
    json sensors = json::array();
    for (const auto& s : d.sensors) {
        sensors.push_back(json{{"sid", s.sid},
                               {"attrs", s.attrs},
                               {"master_key", symkey_to_json(s.master_key)}});
    }
    return json{{"curve", curve_to_json(bs.params)},
                {"patched_defects", defects_to_json(bs.defects)},
                {"base_station",
                 json{{"x", scalar_to_json(bs.x)},
                      {"X", point_to_json(bs.x_point)},
                      {"universe", bs.universe},
                      {"attribute_master", std::move(master)},
                      {"clusters", std::move(clusters)},
                      {"reserved", std::move(reserved)}}},
                {"cluster_heads", std::move(chs)},
                {"sensor_nodes", std::move(sensors)}};
}

proto::Deployment deployment_from_json(const json& j) {
    proto::Deployment d;
    d.bs.params = curve_from_json(j.at("curve"));
    d.bs.defects = defects_from_json(j.at("patched_defects"));
    const json& bsj = j.at("base_station");
    d.bs.x = scalar_from_json(bsj.at("x"));
    d.bs.x_point = point_from_json(bsj.at("X"));
    d.bs.universe = bsj.at("universe").get<std::vector<std::string>>();
    for (const auto& [attr, entry] : bsj.at("attribute_master").items()) {
        d.bs.attribute_master.secrets[attr] = scalar_from_json(entry.at("t"));
        d.bs.attribute_master.points[attr] = point_from_json(entry.at("T"));
    }
    for (const auto& [cid, rec] : bsj.at("clusters").items()) {
        proto::ClusterRecord r;
        r.master_key = symkey_from_json(rec.at("master_key"));
        r.b = scalar_from_json(rec.at("b"));
        r.b_point = point_from_json(rec.at("B"));
        r.k_u = symkey_from_json(rec.at("K_u"));
        r.t_ch = Timestamp{rec.at("t_ch").get<uint64_t>()};
        r.w_ch = Timestamp{rec.at("w_ch").get<uint64_t>()};
        r.attrs = rec.at("attrs").get<std::vector<std::string>>();
        d.bs.clusters.emplace(cid, std::move(r));
    }
    for (const auto& res : bsj.at("reserved")) {
        d.bs.reserved.push_back(proto::ReservedClusterId{
            res.at("cid").get<std::string>(), symkey_from_json(res.at("master_key"))});
    }
    for (const auto& chj : j.at("cluster_heads")) {
        proto::ClusterHeadState ch;
        ch.cid = chj.at("cid").get<std::string>();
        ch.attrs = chj.at("attrs").get<std::vector<std::string>>();
        ch.master_key = symkey_from_json(chj.at("master_key"));
        ch.k_u = symkey_from_json(chj.at("K_u"));
        ch.b_point = point_from_json(chj.at("B"));
        for (const auto& [attr, pt] : chj.at("T").items()) {
            ch.t_points[attr] = point_from_json(pt);
        }
        ch.t_ch = Timestamp{chj.at("t_ch").get<uint64_t>()};
        ch.w_ch = Timestamp{chj.at("w_ch").get<uint64_t>()};
        ch.params = d.bs.params;
        ch.defects = d.bs.defects;
        d.cluster_heads.push_back(std::move(ch));
    }
    for (const auto& sj : j.at("sensor_nodes")) {
        d.sensors.push_back(proto::SensorNodeState{sj.at("sid").get<std::string>(),
                                                   sj.at("attrs").get<std::vector<std::string>>(),
                                                   symkey_from_json(sj.at("master_key"))});
    }
    return d;
}

json card_to_json(const proto::SmartCard& card, const ecc::CurveParams& params) {
    json leaf_keys = json::object();
    for (const auto& [leaf, key] : card.leaf_keys.keys) {
        leaf_keys[std::to_string(leaf)] = scalar_to_json(key);
    }
    json pairs = json::array();
    for (const auto& [s, cid] : card.key_id_pairs) {
        pairs.push_back(json{{"S", digest_to_json(s)}, {"cid", cid}});
    }
    return json{{"G", point_to_json(card.g)},
                {"tsu", card.tsu.ticks},
                {"tree", abe::tree_to_json(card.tree)},
                {"R", digest_to_json(card.r_digest)},
                {"leaf_keys", std::move(leaf_keys)},
                {"Y", point_to_json(card.y_point)},
                {"hash", card.hash_alg},
                {"pairs", std::move(pairs)},
                {"r", hex_encode(ByteView(card.r))}};
}

proto::SmartCard card_from_json(const json& j, const ecc::CurveParams&) {
    proto::SmartCard card;
    card.g = point_from_json(j.at("G"));
    card.tsu = Timestamp{j.at("tsu").get<uint64_t>()};
    card.tree = abe::tree_from_json(j.at("tree"));
    card.r_digest = digest_from_json(j.at("R"));
    for (const auto& [leaf, key] : j.at("leaf_keys").items()) {
        card.leaf_keys.keys[abe::NodeId(std::stoul(leaf))] = scalar_from_json(key);
    }
    card.y_point = point_from_json(j.at("Y"));
    card.hash_alg = j.at("hash").get<std::string>();
    for (const auto& pj : j.at("pairs")) {
        card.key_id_pairs.emplace_back(digest_from_json(pj.at("S")),
                                       pj.at("cid").get<std::string>());
    }
    card.r = hex_decode(j.at("r").get<std::string>());
    return card;
}

}  // namespace wsnac::serialize
