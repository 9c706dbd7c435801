#include "tdma/medium.hpp"

#include <cmath>
#include <stdexcept>

namespace tdma {

void SuperframeConfig::validate() const {
    if (tdma_slots < 1) throw std::invalid_argument("tdma_slots must be >= 1");
    if (contention_minislots < 1) throw std::invalid_argument("contention_minislots must be >= 1");
    if (kappa < 0) throw std::invalid_argument("kappa must be >= 0");
    if (beta_max < 1) throw std::invalid_argument("beta_max must be >= 1");
    if (max_age < 1) throw std::invalid_argument("max_age must be >= 1");
}

std::vector<TransmissionRecord> resolve_transmissions(const Topology& t, const std::set<NodeId>& senders, Time time) {
    std::vector<TransmissionRecord> out;
    out.reserve(senders.size());
    for (auto s : senders) {
        TransmissionRecord rec{time, s, {}, {}};
        for (auto r : t.neighbors(s)) {
            bool clean = !senders.count(r);
            if (clean) {
                for (auto other : t.neighbors(r)) {
                    if (other != s && senders.count(other)) {
                        clean = false;
                        break;
                    }
                }
            }
            (clean ? rec.receivers_ok : rec.collided_at).push_back(r);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<TransmissionRecord> overhead_round(const Topology& t,
                                               const std::map<NodeId, Frame>& pending,
                                               const SuperframeConfig& config,
                                               Rng& rng,
                                               Time window_start) {
    std::map<int, std::set<NodeId>> by_slot;
    for (const auto& [sender, frame] : pending)
        by_slot[static_cast<int>(uniform_int(rng, 0, config.contention_minislots - 1))].insert(sender);
    std::vector<TransmissionRecord> out;
    for (const auto& [slot, senders] : by_slot) {
        auto recs = resolve_transmissions(t, senders, window_start + slot);
        out.insert(out.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
    }
    return out;
}

std::vector<TransmissionRecord> tdma_round(const Topology& t,
                                           const std::map<int, std::set<NodeId>>& transmitters,
                                           const SuperframeConfig& config) {
    std::vector<TransmissionRecord> out;
    for (const auto& [slot, senders] : transmitters) {
        if (slot < 0 || slot >= config.tdma_slots) throw std::out_of_range("TDMA slot index out of range");
        auto recs = resolve_transmissions(t, senders, slot);
        out.insert(out.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
    }
    return out;
}

double effective_tau(const SuperframeConfig& config, int contenders) {
    if (contenders <= 1) return 1.0;
    return std::pow(1.0 - 1.0 / config.contention_minislots, contenders - 1);
}

double effective_tau_for_delta(const SuperframeConfig& config, int delta) {
    return effective_tau(config, delta * delta + 1);
}

}  // namespace tdma
