#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wsnac/adversary.hpp"
#include "wsnac/protocol.hpp"

namespace wsnac::sim {

// One scripted step of a scenario. Exactly the fields its op uses are set.
struct Action {
    std::string op;  // register | login | deliver | delay | tamper | misdeliver | replay |
                     // attack_insider | attack_capture | attack_decrypt_forwards |
                     // analyze_storage | analyze_rekey
    std::string user;
    std::string ch;
    std::string password_override;
    bool has_password_override = false;
    uint64_t ticks = 0;        // delay
    uint64_t count = 1;        // deliver
    size_t event_index = 0;    // replay
    uint64_t at_tick = 0;      // replay
    std::string field;         // tamper target: body | nonce | tag | n_point | ts_ch | masked |
                               // t_ch | check | k2
    Bytes tamper_xor;          // XOR'd into the field, repeating as needed
    std::vector<Bytes> dictionary;  // attack_insider
    uint64_t users = 0;        // analyze_storage
    std::string inject_cid;    // forge target cid carried inside an injected forward
};

struct UserSpec {
    Bytes id;
    Bytes password;
    abe::AccessTree tree;
};

struct ChSpec {
    proto::ClusterId cid;
    std::vector<abe::AttributeId> attrs;
    Bytes data;  // sensor payload this cluster head serves
};

struct SimConfig {
    ecc::CurveParams params;
    proto::Defects defects;
    uint64_t seed = 1;
    uint64_t delta_t = 5;
    size_t m_prime = 0;
    uint64_t ch_lifetime = proto::kDefaultChLifetime;
    std::vector<abe::AttributeId> universe;
    std::vector<ChSpec> cluster_heads;
    std::vector<UserSpec> users;
    std::vector<Action> actions;
    std::vector<std::string> expected_aborts;  // abort codes the scenario intends to produce

    static SimConfig from_json(const nlohmann::json& j);
    static SimConfig load_file(const std::string& path);
};

struct Event {
    uint64_t tick = 0;
    uint64_t seq = 0;
    std::string actor;
    std::string kind;
    Bytes payload;          // message bytes; empty for report-only events
    nlohmann::json report;  // structured data; null for payload-only events
};

// Public-channel message kinds: exactly what a passive adversary sees.
bool is_public_kind(const std::string& kind);

struct Transcript {
    std::vector<Event> events;

    nlohmann::json to_json() const;
    std::string to_json_text() const;  // canonical single-line form
    std::vector<std::string> abort_codes() const;
};

// The eavesdropper's projection: public-channel events only, in order.
// Registration traffic travels the secure channel and is excluded.
std::vector<const Event*> eavesdrop_view(const Transcript& t);

struct ReplayVerdict {
    bool accepted = false;
    std::string code;  // abort code when rejected
};

// Owns every entity state for one scenario run. Single-threaded; distinct
// simulations share nothing.
class Simulation {
public:
    explicit Simulation(SimConfig config);

    // Executes predeploy and then every scripted action. Aborts become
    // transcript events, not exceptions; only config errors throw.
    void run();

    // Re-injects the bytes of a recorded public-channel event at the given
    // tick and records the receiving entity's verdict.
    ReplayVerdict replay_check(size_t event_index, uint64_t at_tick);

    const Transcript& transcript() const { return transcript_; }
    const SimConfig& config() const { return config_; }
    const proto::Deployment& deployment() const { return deployment_; }
    const std::vector<proto::SmartCard>& issued_cards() const { return cards_; }

private:
    struct InFlight {
        std::string kind;
        Bytes bytes;
        std::string dest;     // "BS", a cluster id, or a user id (utf-8)
        size_t session = 0;   // index into sessions_
    };

    struct SessionCtx {
        Bytes user_id;
        proto::UserSession session;
    };

    Event& emit(const std::string& actor, const std::string& kind);
    void emit_abort(const std::string& actor, const Error& err);
    void do_action(const Action& action);
    void do_register(const Action& action);
    void do_login(const Action& action);
    void deliver_one(std::optional<std::string> forced_dest);
    // Processes a message at its destination; used by both delivery and
    // replay. Returns follow-up traffic to enqueue.
    std::vector<InFlight> process(const InFlight& msg, bool record_events);
    void do_tamper(const Action& action);
    void do_inject_forward(const Action& action);
    void do_attack_insider(const Action& action);
    void do_attack_capture(const Action& action);
    void do_attack_decrypt_forwards();
    const proto::ClusterHeadState& cluster_head(const proto::ClusterId& cid) const;
    const UserSpec& user_spec(const Bytes& id) const;

    SimConfig config_;
    DetRng rng_;
    LogicalClock clock_;
    proto::Deployment deployment_;
    Transcript transcript_;
    std::deque<InFlight> channel_;
    std::vector<SessionCtx> sessions_;
    std::map<Bytes, proto::SmartCard> cards_by_user_;
    std::vector<proto::SmartCard> cards_;
    std::map<Bytes, adversary::InsiderView> insider_views_;
    std::optional<adversary::CapturedChSecrets> captured_;
    std::map<size_t, InFlight> public_messages_;  // event seq -> routing copy
    bool deployed_ = false;
};

Transcript run_scenario(const SimConfig& config);

}  // namespace wsnac::sim
