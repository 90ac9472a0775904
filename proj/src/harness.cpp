#include "wsnac/harness.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace wsnac::sim {

using nlohmann::json;

namespace {

Bytes data_field(const json& j) {
    if (j.is_string()) return to_bytes(j.get<std::string>());
    if (j.is_object() && j.contains("hex")) return hex_decode(j.at("hex").get<std::string>());
    throw Error(ErrorCode::ConfigError, "data must be a string or {\"hex\": ...}");
}

std::string pad3(size_t k) {
    std::string s = std::to_string(k);
    return std::string(s.size() >= 3 ? 0 : 3 - s.size(), '0') + s;
}

}  // namespace

SimConfig SimConfig::from_json(const json& j) {
    SimConfig cfg;
    try {
        const json& curve = j.at("curve");
        if (curve.is_string()) {
            std::string name = curve.get<std::string>();
            if (name == "toy17") cfg.params = ecc::toy17();
            else if (name == "p160") cfg.params = ecc::p160();
            else throw Error(ErrorCode::ConfigError, "unknown curve " + name);
        } else if (curve.is_object() && curve.contains("file")) {
            cfg.params = ecc::load_curve_file(curve.at("file").get<std::string>());
        } else {
            throw Error(ErrorCode::ConfigError, "curve must be a name or {\"file\": ...}");
        }

        std::string mode = j.value("mode", "patched");
        if (mode == "patched") cfg.defects = proto::Defects::patched();
        else if (mode == "strict") cfg.defects = proto::Defects::strict();
        else throw Error(ErrorCode::ConfigError, "mode must be strict or patched");
        for (const auto& dj : j.value("patched_defects", json::array())) {
            std::string d = dj.get<std::string>();
            if (d == "D1") cfg.defects.d1_user_lookup = true;
            else if (d == "D2") cfg.defects.d2_stored_secrets = true;
            else if (d == "D3") cfg.defects.d3_unmask_fix = true;
            else throw Error(ErrorCode::ConfigError, "unknown defect " + d);
        }

        cfg.seed = j.value("seed", uint64_t{1});
        cfg.delta_t = j.value("delta_t", uint64_t{5});
        cfg.m_prime = j.value("m_prime", size_t{0});
        cfg.ch_lifetime = j.value("ch_lifetime", proto::kDefaultChLifetime);
        cfg.universe = j.at("universe").get<std::vector<std::string>>();
        if (cfg.universe.empty()) throw Error(ErrorCode::ConfigError, "empty attribute universe");

        if (j.contains("cluster_heads")) {
            for (const auto& cj : j.at("cluster_heads")) {
                ChSpec spec;
                spec.cid = cj.at("id").get<std::string>();
                spec.attrs = cj.at("attrs").get<std::vector<std::string>>();
                spec.data = cj.contains("data") ? data_field(cj.at("data"))
                                                : to_bytes("data:" + spec.cid);
                cfg.cluster_heads.push_back(std::move(spec));
            }
        } else {
            size_t m = j.at("m").get<size_t>();
            for (size_t i = 1; i <= m; ++i) {
                ChSpec spec;
                spec.cid = "CH" + pad3(i);
                spec.attrs = {cfg.universe[(i - 1) % cfg.universe.size()]};
                spec.data = to_bytes("data:" + spec.cid);
                cfg.cluster_heads.push_back(std::move(spec));
            }
        }

        for (const auto& uj : j.value("users", json::array())) {
            UserSpec spec;
            spec.id = to_bytes(uj.at("id").get<std::string>());
            spec.password = to_bytes(uj.at("password").get<std::string>());
            spec.tree = abe::tree_from_json(uj.at("tree"));
            for (const auto& existing : cfg.users) {
                if (existing.id == spec.id) {
                    throw Error(ErrorCode::ConfigError, "duplicate user in roster");
                }
            }
            cfg.users.push_back(std::move(spec));
        }

        for (const auto& aj : j.value("actions", json::array())) {
            Action a;
            a.op = aj.at("op").get<std::string>();
            a.user = aj.value("user", "");
            a.ch = aj.value("ch", "");
            if (aj.contains("password")) {
                a.password_override = aj.at("password").get<std::string>();
                a.has_password_override = true;
            }
            a.ticks = aj.value("ticks", uint64_t{0});
            a.count = aj.value("count", uint64_t{1});
            a.event_index = aj.value("event", size_t{0});
            a.at_tick = aj.value("at_tick", uint64_t{0});
            a.field = aj.value("field", "");
            if (aj.contains("xor_hex")) a.tamper_xor = hex_decode(aj.at("xor_hex").get<std::string>());
            if (aj.contains("dictionary")) {
                const json& dict = aj.at("dictionary");
                if (dict.is_object() && dict.contains("file")) {
                    a.dictionary = adversary::load_dictionary(dict.at("file").get<std::string>());
                } else {
                    for (const auto& w : dict) a.dictionary.push_back(to_bytes(w.get<std::string>()));
                }
            }
            a.users = aj.value("users", uint64_t{0});
            a.inject_cid = aj.value("inject_cid", "");
            cfg.actions.push_back(std::move(a));
        }

        cfg.expected_aborts = j.value("expected_aborts", std::vector<std::string>{});
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, e.what());
    }
    return cfg;
}

SimConfig SimConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open scenario " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, std::string("scenario parse: ") + e.what());
    }
    return from_json(j);
}

bool is_public_kind(const std::string& kind) {
    return kind == "login_request" || kind == "auth_forward" || kind == "auth_reply";
}

json Transcript::to_json() const {
    json out = json::array();
    for (const Event& e : events) {
        json ej{{"tick", e.tick}, {"seq", e.seq}, {"actor", e.actor}, {"kind", e.kind}};
        if (!e.payload.empty()) ej["payload"] = hex_encode(ByteView(e.payload));
        if (!e.report.is_null()) ej["report"] = e.report;
        out.push_back(std::move(ej));
    }
    return out;
}

std::string Transcript::to_json_text() const { return to_json().dump(); }

std::vector<std::string> Transcript::abort_codes() const {
    std::vector<std::string> codes;
    for (const Event& e : events) {
        if (e.kind == "abort") codes.push_back(e.report.at("code").get<std::string>());
    }
    return codes;
}

std::vector<const Event*> eavesdrop_view(const Transcript& t) {
    std::vector<const Event*> view;
    for (const Event& e : t.events) {
        if (is_public_kind(e.kind)) view.push_back(&e);
    }
    return view;
}

Simulation::Simulation(SimConfig config) : config_(std::move(config)), rng_(config_.seed) {}

Event& Simulation::emit(const std::string& actor, const std::string& kind) {
    Event e;
    e.tick = clock_.ticks;
    e.seq = transcript_.events.size();
    e.actor = actor;
    e.kind = kind;
    transcript_.events.push_back(std::move(e));
    return transcript_.events.back();
}

void Simulation::emit_abort(const std::string& actor, const Error& err) {
    Event& e = emit(actor, "abort");
    e.report = json{{"actor", actor},
                    {"code", std::string(error_code_name(err.code()))},
                    {"detail", err.what()}};
}

const proto::ClusterHeadState& Simulation::cluster_head(const proto::ClusterId& cid) const {
    for (const auto& ch : deployment_.cluster_heads) {
        if (ch.cid == cid) return ch;
    }
    throw Error(ErrorCode::ConfigError, "no such cluster head " + cid);
}

const UserSpec& Simulation::user_spec(const Bytes& id) const {
    for (const auto& u : config_.users) {
        if (u.id == id) return u;
    }
    throw Error(ErrorCode::ConfigError, "no such user in roster");
}

void Simulation::run() {
    std::vector<proto::ClusterSpec> specs;
    for (const auto& ch : config_.cluster_heads) specs.push_back({ch.cid, ch.attrs});
    try {
        deployment_ = proto::predeploy(config_.params, specs, config_.m_prime, config_.universe,
                                       clock_, rng_, config_.defects, config_.ch_lifetime);
        deployed_ = true;
        Event& e = emit("BS", "predeploy");
        e.report = json{{"curve", config_.params.name},
                        {"m", config_.cluster_heads.size()},
                        {"m_prime", config_.m_prime},
                        {"sensors", deployment_.sensors.size()}};
    } catch (const Error& err) {
        emit_abort("BS", err);
        return;  // nothing to act on without a deployment
    }

    for (const Action& action : config_.actions) do_action(action);
}

void Simulation::do_action(const Action& action) {
    if (action.op == "register") {
        do_register(action);
    } else if (action.op == "login") {
        do_login(action);
    } else if (action.op == "deliver") {
        for (uint64_t i = 0; i < action.count; ++i) deliver_one(std::nullopt);
    } else if (action.op == "delay") {
        clock_.advance(action.ticks);
    } else if (action.op == "tamper") {
        do_tamper(action);
    } else if (action.op == "misdeliver") {
        deliver_one(action.ch);
    } else if (action.op == "replay") {
        replay_check(action.event_index, action.at_tick);
    } else if (action.op == "inject_forward") {
        do_inject_forward(action);
    } else if (action.op == "attack_insider") {
        do_attack_insider(action);
    } else if (action.op == "attack_capture") {
        do_attack_capture(action);
    } else if (action.op == "attack_decrypt_forwards") {
        do_attack_decrypt_forwards();
    } else if (action.op == "analyze_storage") {
        auto report = adversary::storage_report(config_.cluster_heads.size(), config_.m_prime,
                                                action.users);
        Event& e = emit("analyst", "storage_report");
        e.report = json{{"m", report.m},
                        {"m_prime", report.m_prime},
                        {"users", report.users},
                        {"pairs_per_card", report.pairs_per_card},
                        {"hash_ops_per_card", report.hash_ops_per_card},
                        {"total_hash_ops", report.total_hash_ops}};
    } else if (action.op == "analyze_rekey") {
        try {
            auto report = adversary::rekey_cost_report(deployment_.bs, cards_, action.ch);
            Event& e = emit("analyst", "rekey_report");
            e.report = json{{"compromised", action.ch},
                            {"affected_cards", report.affected_cards},
                            {"recomputed_pairs", report.recomputed_pairs}};
        } catch (const Error& err) {
            emit_abort("analyst", err);
        }
    } else {
        throw Error(ErrorCode::ConfigError, "unknown action op " + action.op);
    }
}

void Simulation::do_register(const Action& action) {
    const UserSpec& spec = user_spec(to_bytes(action.user));
    auto reg = proto::register_client(spec.id, spec.password, rng_);
    insider_views_[spec.id] = adversary::InsiderView{reg.request.rpw, spec.id};
    Event& e = emit(action.user, "register_request");
    e.report = json{{"user", action.user}, {"rpw", hex_encode(reg.request.rpw.view())}};
    try {
        auto issued = proto::register_bs(deployment_.bs, reg.request, spec.tree, clock_, rng_);
        issued.card.r = reg.r;  // owner completes the card
        cards_by_user_[spec.id] = issued.card;
        cards_.push_back(issued.card);
        Event& ce = emit("BS", "card_issued");
        ce.report = json{{"user", action.user},
                         {"pairs", issued.card.key_id_pairs.size()},
                         {"siu_hash_ops", issued.siu_hash_ops}};
    } catch (const Error& err) {
        emit_abort("BS", err);
    }
}

void Simulation::do_login(const Action& action) {
    Bytes id = to_bytes(action.user);
    auto card = cards_by_user_.find(id);
    if (card == cards_by_user_.end()) {
        throw Error(ErrorCode::ConfigError, "login before registration: " + action.user);
    }
    Bytes password =
        action.has_password_override ? to_bytes(action.password_override) : user_spec(id).password;
    try {
        auto [request, session] =
            proto::login(card->second, id, password, action.ch, clock_, rng_, config_.params);
        sessions_.push_back(SessionCtx{id, std::move(session)});
        Event& e = emit(action.user, "login_request");
        e.payload = request.to_bytes(config_.params);
        InFlight msg{"login_request", e.payload, "BS", sessions_.size() - 1};
        public_messages_[e.seq] = msg;
        channel_.push_back(std::move(msg));
    } catch (const Error& err) {
        emit_abort(action.user, err);
    }
}

void Simulation::deliver_one(std::optional<std::string> forced_dest) {
    if (channel_.empty()) throw Error(ErrorCode::ConfigError, "deliver with empty channel");
    InFlight msg = channel_.front();
    channel_.pop_front();
    if (forced_dest) {
        Event& e = emit("channel", "misdeliver");
        e.report = json{{"kind", msg.kind}, {"to", *forced_dest}};
        msg.dest = *forced_dest;
    }
    clock_.advance(1);
    for (InFlight& next : process(msg, true)) channel_.push_back(std::move(next));
}

std::vector<Simulation::InFlight> Simulation::process(const InFlight& msg, bool record_events) {
    std::vector<InFlight> out;
    if (msg.kind == "login_request") {
        try {
            auto request = proto::LoginRequest::from_bytes(ByteView(msg.bytes), config_.params);
            auto result = proto::bs_authenticate(deployment_.bs, request, clock_, rng_);
            if (record_events) {
                Event& m = emit("BS", "bs_trial_metric");
                m.report = json{{"trial_decryptions", result.trial_decryptions},
                                {"registered_users", deployment_.bs.users.size()}};
                Event& e = emit("BS", "auth_forward");
                e.payload = result.forward.to_bytes();
                InFlight next{"auth_forward", e.payload, result.cid, msg.session};
                public_messages_[e.seq] = next;
                out.push_back(std::move(next));
            }
        } catch (const Error& err) {
            if (record_events) emit_abort("BS", err);
            throw;
        }
    } else if (msg.kind == "auth_forward") {
        const auto& ch = cluster_head(msg.dest);
        try {
            auto forward = proto::AuthForward::from_bytes(ByteView(msg.bytes));
            auto verified = proto::ch_verify(ch, forward, clock_, config_.delta_t);
            Bytes data;
            for (const auto& spec : config_.cluster_heads) {
                if (spec.cid == ch.cid) data = spec.data;
            }
            auto reply = proto::ch_encrypt_reply(ch, verified, ByteView(data), clock_, rng_);
            if (record_events) {
                Event& e = emit(ch.cid, "auth_reply");
                e.payload = reply.to_bytes(config_.params);
                InFlight next{"auth_reply", e.payload, to_string(ByteView(verified.user_id)),
                              msg.session};
                public_messages_[e.seq] = next;
                out.push_back(std::move(next));
            }
        } catch (const Error& err) {
            if (record_events) emit_abort(ch.cid, err);
            throw;
        }
    } else if (msg.kind == "auth_reply") {
        if (msg.session >= sessions_.size()) {
            throw Error(ErrorCode::ConfigError, "reply without a session");
        }
        const SessionCtx& ctx = sessions_[msg.session];
        try {
            auto reply = proto::AuthReply::from_bytes(ByteView(msg.bytes), config_.params);
            Bytes data = proto::user_decrypt(cards_by_user_.at(ctx.user_id), ctx.session, reply,
                                             clock_, config_.delta_t, config_.params);
            if (record_events) {
                Event& e = emit(msg.dest, "decrypt_success");
                e.report = json{{"user", msg.dest}, {"data", hex_encode(ByteView(data))}};
            }
        } catch (const Error& err) {
            if (record_events) emit_abort(msg.dest, err);
            throw;
        }
    } else {
        throw Error(ErrorCode::ConfigError, "unroutable message kind " + msg.kind);
    }
    return out;
}

void Simulation::do_tamper(const Action& action) {
    if (channel_.empty()) throw Error(ErrorCode::ConfigError, "tamper with empty channel");
    if (action.tamper_xor.empty() && action.field != "k2") {
        throw Error(ErrorCode::ConfigError, "tamper needs xor_hex");
    }
    InFlight& msg = channel_.front();
    auto apply_xor = [&](uint8_t* data, size_t size) {
        for (size_t i = 0; i < size && i < action.tamper_xor.size(); ++i) {
            data[i] ^= action.tamper_xor[i];
        }
    };
    auto tamper_ct = [&](AuthCiphertext& ct) {
        if (action.field == "body") {
            if (ct.body.empty()) throw Error(ErrorCode::ConfigError, "empty body");
            apply_xor(ct.body.data(), ct.body.size());
        } else if (action.field == "nonce") {
            apply_xor(ct.nonce.data(), ct.nonce.size());
        } else if (action.field == "tag") {
            apply_xor(ct.tag.bytes.data(), ct.tag.bytes.size());
        } else {
            throw Error(ErrorCode::ConfigError, "unknown tamper field " + action.field);
        }
    };

    if (msg.kind == "login_request") {
        auto request = proto::LoginRequest::from_bytes(ByteView(msg.bytes), config_.params);
        tamper_ct(request.enc);
        msg.bytes = request.to_bytes(config_.params);
    } else if (msg.kind == "auth_forward") {
        auto forward = proto::AuthForward::from_bytes(ByteView(msg.bytes));
        tamper_ct(forward.enc);
        msg.bytes = forward.to_bytes();
    } else if (msg.kind == "auth_reply") {
        auto reply = proto::AuthReply::from_bytes(ByteView(msg.bytes), config_.params);
        if (action.field == "ts_ch") {
            auto enc = reply.ts_ch.encode();
            apply_xor(enc.data(), enc.size());
            reply.ts_ch = Timestamp::decode(enc);
        } else if (action.field == "masked") {
            apply_xor(reply.masked.data(), reply.masked.size());
        } else if (action.field == "t_ch") {
            auto enc = reply.t_ch.encode();
            apply_xor(enc.data(), enc.size());
            reply.t_ch = Timestamp::decode(enc);
        } else if (action.field == "check") {
            apply_xor(reply.check.bytes.data(), reply.check.bytes.size());
        } else if (action.field == "k2") {
            // Swap in a valid but wrong share point.
            if (reply.k2.empty()) throw Error(ErrorCode::ConfigError, "empty k2");
            auto& point = reply.k2.begin()->second;
            point = ecc::point_add(point, config_.params.g, config_.params);
        } else {
            tamper_ct(reply.m1);
        }
        msg.bytes = reply.to_bytes(config_.params);
    }
    Event& e = emit("channel", "tamper");
    e.report = json{{"kind", msg.kind}, {"field", action.field}};
}

void Simulation::do_inject_forward(const Action& action) {
    const auto& ch = cluster_head(action.ch);
    Bytes user_id = to_bytes(action.user.empty() ? "mallory" : action.user);
    Bytes g_bytes = ecc::point_encode(config_.params.g, config_.params);
    std::array<uint8_t, 8> zeros{};
    Digest zero_digest;
    Bytes plaintext = encode_fields(
        {ByteView(user_id), ByteView(to_bytes(action.inject_cid)), ByteView(zeros),
         ByteView(clock_.now().encode()), ByteView(g_bytes), zero_digest.view(),
         ByteView(g_bytes), ByteView(zeros)});
    proto::AuthForward forged{sym_encrypt(ch.master_key, rng_.nonce(), ByteView(plaintext))};
    Event& e = emit("attacker", "auth_forward");
    e.payload = forged.to_bytes();
    InFlight msg{"auth_forward", e.payload, ch.cid, SIZE_MAX};
    public_messages_[e.seq] = msg;
    channel_.push_back(std::move(msg));
}

void Simulation::do_attack_insider(const Action& action) {
    Bytes id = to_bytes(action.user);
    auto card = cards_by_user_.find(id);
    auto view = insider_views_.find(id);
    if (card == cards_by_user_.end() || view == insider_views_.end()) {
        throw Error(ErrorCode::ConfigError, "insider attack needs a registered user");
    }
    auto report = adversary::insider_guess_password(card->second, view->second, action.dictionary);
    Event& e = emit("insider", "insider_report");
    e.report = json{{"user", action.user},
                    {"recovered", report.password.has_value()},
                    {"attempts", report.attempts},
                    {"dictionary_size", report.dictionary_size}};
    if (report.password) e.report["password"] = to_string(ByteView(*report.password));
}

void Simulation::do_attack_capture(const Action& action) {
    captured_ = adversary::capture_cluster_head(cluster_head(action.ch));
    Event& e = emit("attacker", "capture_report");
    e.report = json{{"cid", action.ch}};
}

void Simulation::do_attack_decrypt_forwards() {
    if (!captured_) throw Error(ErrorCode::ConfigError, "no captured cluster head");
    for (const Event* ev : eavesdrop_view(transcript_)) {
        if (ev->kind != "auth_forward") continue;
        json report{{"forward_seq", ev->seq}, {"cid", captured_->cid}};
        try {
            auto forward = proto::AuthForward::from_bytes(ByteView(ev->payload));
            auto leak = adversary::decrypt_forward_with_captured_key(*captured_, forward);
            report["leaked_id"] = to_string(ByteView(leak.user_id));
            report["tsu"] = leak.tsu.ticks;
            report["ok"] = true;
        } catch (const Error& err) {
            report["ok"] = false;
            report["code"] = std::string(error_code_name(err.code()));
        }
        Event& e = emit("attacker", "leak_report");
        e.report = std::move(report);
    }
}

ReplayVerdict Simulation::replay_check(size_t event_index, uint64_t at_tick) {
    auto it = public_messages_.find(event_index);
    if (it == public_messages_.end()) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "event " + std::to_string(event_index) + " is not a public message");
    }
    uint64_t before = clock_.ticks;
    clock_.ticks = at_tick;
    ReplayVerdict verdict;
    try {
        process(it->second, false);
        verdict.accepted = true;
    } catch (const Error& err) {
        verdict.code = error_code_name(err.code());
    }
    clock_.ticks = std::max(before, at_tick);
    Event& e = emit("channel", "replay_verdict");
    e.tick = at_tick;
    e.report = json{{"event", event_index},
                    {"at_tick", at_tick},
                    {"accepted", verdict.accepted}};
    if (!verdict.accepted) e.report["code"] = verdict.code;
    return verdict;
}

Transcript run_scenario(const SimConfig& config) {
    Simulation sim(config);
    sim.run();
    return sim.transcript();
}

}  // namespace wsnac::sim
