#include "wsnac/adversary.hpp"

#include <fstream>
#include <sstream>

namespace wsnac::adversary {

InsiderReport insider_guess_password(const StolenCardView& card, const InsiderView& seen,
                                     const std::vector<Bytes>& dictionary) {
    InsiderReport report;
    report.dictionary_size = dictionary.size();
    for (const Bytes& candidate : dictionary) {
        ++report.attempts;
        Digest guess =
            hash(encode_fields({ByteView(seen.id), ByteView(card.r), ByteView(candidate)}));
        if (guess == seen.rpw) {
            report.password = candidate;
            return report;
        }
    }
    return report;
}

std::vector<Bytes> parse_dictionary(const std::string& text) {
    std::vector<Bytes> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        out.push_back(to_bytes(line));
    }
    return out;
}

std::vector<Bytes> load_dictionary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open dictionary " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dictionary(buf.str());
}

CapturedChSecrets capture_cluster_head(const proto::ClusterHeadState& ch) { return ch; }

LeakedForward decrypt_forward_with_captured_key(const CapturedChSecrets& secrets,
                                                const proto::AuthForward& forward) {
    Bytes plain = sym_decrypt(secrets.master_key, forward.enc);
    auto fields = decode_fields(ByteView(plain));
    if (fields.size() != 8) throw Error(ErrorCode::MalformedMessage, "bad forward layout");

    LeakedForward leak;
    leak.user_id = fields[0];
    leak.cid = to_string(ByteView(fields[1]));
    if (fields[2].size() != 8 || fields[3].size() != 8 || fields[7].size() != 8 ||
        fields[5].size() != kDigestSize) {
        throw Error(ErrorCode::MalformedMessage, "bad forward field widths");
    }
    std::copy(fields[2].begin(), fields[2].end(), leak.t_iu.begin());
    std::array<uint8_t, 8> tmp;
    std::copy(fields[3].begin(), fields[3].end(), tmp.begin());
    leak.t_bs = Timestamp::decode(tmp);
    leak.n_point = ecc::point_decode(ByteView(fields[4]), secrets.params);
    std::copy(fields[5].begin(), fields[5].end(), leak.t1.bytes.begin());
    leak.y_point = ecc::point_decode(ByteView(fields[6]), secrets.params);
    std::copy(fields[7].begin(), fields[7].end(), tmp.begin());
    leak.tsu = Timestamp::decode(tmp);
    return leak;
}

StorageReport storage_report(uint64_t m, uint64_t m_prime, uint64_t users) {
    StorageReport report;
    report.m = m;
    report.m_prime = m_prime;
    report.users = users;
    report.pairs_per_card = m + m_prime;
    report.hash_ops_per_card = m + m_prime;
    report.total_hash_ops = users * (m + m_prime);
    return report;
}

RekeyCostReport rekey_cost_report(const proto::BaseStationState& bs,
                                  const std::vector<proto::SmartCard>& issued_cards,
                                  const proto::ClusterId& compromised) {
    if (!bs.clusters.count(compromised)) {
        throw Error(ErrorCode::UnknownClusterHead, compromised);
    }
    RekeyCostReport report;
    for (const proto::SmartCard& card : issued_cards) {
        for (const auto& [s, cid] : card.key_id_pairs) {
            if (cid == compromised) {
                ++report.affected_cards;
                ++report.recomputed_pairs;
                break;
            }
        }
    }
    return report;
}

}  // namespace wsnac::adversary
