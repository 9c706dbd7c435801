#pragma once

#include <map>
#include <set>
#include <vector>

#include "tdma/frame.hpp"
#include "tdma/rng.hpp"
#include "tdma/topology.hpp"

namespace tdma {

/// Radio time layout. Each superframe is `tdma_slots` application slots
/// followed by `contention_minislots` overhead mini-slots. Protocol time
/// (kappa, beta, ages) runs on the concatenation of the overhead parts.
struct SuperframeConfig {
    int tdma_slots = 32;
    int contention_minislots = 16;
    int kappa = 32;
    int beta_max = 16;
    int max_age = 32;  // superframes

    Time max_age_minislots() const { return static_cast<Time>(max_age) * contention_minislots; }
    /// Throws std::invalid_argument if any field is out of range.
    void validate() const;
};

struct TransmissionRecord {
    Time time = 0;  // mini-slot (overhead) or slot index within the superframe (TDMA)
    NodeId sender;
    std::vector<NodeId> receivers_ok;
    std::vector<NodeId> collided_at;

    friend bool operator==(const TransmissionRecord&, const TransmissionRecord&) = default;
};

/// Receiver-centric collision resolution for one mini-slot or slot: a
/// receiver r gets the frame of s iff s is the only transmitter among
/// N_r and r itself is silent.
std::vector<TransmissionRecord> resolve_transmissions(const Topology& t, const std::set<NodeId>& senders, Time time);

/// Slotted random access: each pending sender draws a mini-slot uniformly in
/// [0, C) and collisions are resolved per mini-slot. `window_start` is the
/// global time of mini-slot 0.
std::vector<TransmissionRecord> overhead_round(const Topology& t,
                                               const std::map<NodeId, Frame>& pending,
                                               const SuperframeConfig& config,
                                               Rng& rng,
                                               Time window_start = 0);

/// One TDMA part. Slot indices must lie in [0, T).
std::vector<TransmissionRecord> tdma_round(const Topology& t,
                                           const std::map<int, std::set<NodeId>>& transmitters,
                                           const SuperframeConfig& config);

/// Lower bound on per-frame success with k contenders over C mini-slots:
/// (1 - 1/C)^(k-1).
double effective_tau(const SuperframeConfig& config, int contenders);

/// Worst case over a two-hop zone: k = delta^2 + 1.
double effective_tau_for_delta(const SuperframeConfig& config, int delta);

}  // namespace tdma
