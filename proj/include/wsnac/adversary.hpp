#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wsnac/protocol.hpp"

namespace wsnac::adversary {

// Attack-model inputs only: card contents, captured node state, and
// public-channel bytes. Nothing here accepts base-station secrets — the one
// exception, rekey_cost_report, models the defender's own recovery cost.

// A card read out by side channels; byte-identical to the victim's card.
using StolenCardView = proto::SmartCard;

// Everything pre-loaded into a captured cluster head, master key included.
using CapturedChSecrets = proto::ClusterHeadState;

// The registration-time pair {RPW, ID} as seen by a privileged insider at
// the registration endpoint.
struct InsiderView {
    Digest rpw;
    Bytes id;
};

struct InsiderReport {
    std::optional<Bytes> password;  // recovered, or nullopt after exhaustion
    uint64_t attempts = 0;          // hash evaluations = candidates tried
    uint64_t dictionary_size = 0;
};

// Offline dictionary guessing: for each candidate in order, recompute
// h(ID || r || candidate) with the card-resident r and compare against the
// intercepted RPW. Stops at the first match.
InsiderReport insider_guess_password(const StolenCardView& card, const InsiderView& seen,
                                     const std::vector<Bytes>& dictionary);

// Dictionary file: one UTF-8 candidate per line, empty lines skipped.
std::vector<Bytes> load_dictionary(const std::string& path);
std::vector<Bytes> parse_dictionary(const std::string& text);

// Physical capture: the node's stored state, verbatim.
CapturedChSecrets capture_cluster_head(const proto::ClusterHeadState& ch);

struct LeakedForward {
    Bytes user_id;
    proto::ClusterId cid;
    std::array<uint8_t, 8> t_iu{};
    Timestamp t_bs;
    ecc::CurvePoint n_point;
    Digest t1;
    ecc::CurvePoint y_point;
    Timestamp tsu;
};

// Decrypts an eavesdropped BS-to-CH forward under the captured master key,
// exposing the logged-in identity. Throws Error(AuthFailure) when the
// forward was addressed to a different cluster head.
LeakedForward decrypt_forward_with_captured_key(const CapturedChSecrets& secrets,
                                                const proto::AuthForward& forward);

struct StorageReport {
    uint64_t m = 0;
    uint64_t m_prime = 0;
    uint64_t users = 0;
    uint64_t pairs_per_card = 0;
    uint64_t hash_ops_per_card = 0;
    uint64_t total_hash_ops = 0;
};

// Card provisioning cost: every card stores one (S, CID) pair per deployed
// and reserved cluster id, at one hash each.
StorageReport storage_report(uint64_t m, uint64_t m_prime, uint64_t users);

struct RekeyCostReport {
    uint64_t affected_cards = 0;
    uint64_t recomputed_pairs = 0;
};

// Cost of rotating one compromised cluster head: every issued card carries a
// pair for it, so every card needs one pair recomputed.
RekeyCostReport rekey_cost_report(const proto::BaseStationState& bs,
                                  const std::vector<proto::SmartCard>& issued_cards,
                                  const proto::ClusterId& compromised);

}  // namespace wsnac::adversary
