#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "tdma/frame.hpp"
#include "tdma/medium.hpp"
#include "tdma/naming.hpp"
#include "tdma/rng.hpp"

namespace tdma {

struct RuntimeParams {
    SuperframeConfig superframe;
    NamingParams naming;

    int delta() const { return naming.delta; }
    /// delta^3 + delta^2 + delta
    std::size_t cache_capacity() const;
    void validate() const;
};

/// A cached copy of another node's shared variables.
///
/// `stamp` is the global time at which the origin broadcast the copied
/// value; the entry's age is measured from there, so relaying never makes
/// information look younger than it is. `link_stamp` is the last time the
/// origin was heard directly.
struct CacheEntry {
    NodeId origin;
    SharedVars snapshot;
    Time stamp = 0;
    std::optional<Time> link_stamp;
    bool claims_self = false;  // origin's neighbour list named the holder (stripped from `snapshot`)
    int hops = 3;  // 1 if heard directly and recently, 2 if within the two-hop estimate

    Time age(Time now) const { return now - stamp; }
    friend bool operator==(const CacheEntry&, const CacheEntry&) = default;
};

/// The node's current view of its surroundings, recomputed from the cache.
struct Estimates {
    std::vector<NodeId> n1;  // sorted, excludes self
    std::vector<NodeId> n2;  // sorted, includes self
    std::vector<NodeId> n3;  // sorted, includes self
    std::set<Name> cids;
};

struct NodeState {
    NodeId id;
    SharedVars shared;
    std::map<NodeId, CacheEntry> cache;
    std::vector<NodeId> dom;  // leaders only, ascending rank
    IntervalSet constrained;  // last S_p
    Time last_broadcast = 0;
    Time next_ready = 1;
    std::uint64_t dropped_frames = 0;

    friend bool operator==(const NodeState&, const NodeState&) = default;
};

/// A node in the all-clear state: no cache, name 0, nothing assigned.
NodeState clean_state(NodeId id);

/// A node in an arbitrary type-valid state. `universe` lists ids that may
/// show up in garbage neighbour lists and cache entries; cache stamps lie
/// within max_age before `now`.
NodeState arbitrary_state(NodeId id, const std::vector<NodeId>& universe, const RuntimeParams& params, Time now,
                          Rng& rng);

/// Variable groups a transient fault can overwrite.
enum class CorruptGroup { shared, cache, timers };
void corrupt(NodeState& s, const std::vector<CorruptGroup>& groups, const std::vector<NodeId>& universe,
             const RuntimeParams& params, Time now, Rng& rng);

/// Receipt of a frame. Writes only the cache, never shared variables.
/// Self-references are stripped from claimed neighbour lists.
void on_receive(NodeState& s, const Frame& f, Time now, const RuntimeParams& params);

/// Drops entries older than max_age and forgets links not heard within
/// max_age.
void age_and_expire(NodeState& s, Time now, const RuntimeParams& params);

Estimates estimate(const NodeState& s, Time now, const RuntimeParams& params);

/// Result of one round-robin pass over all guarded commands.
struct Evaluation {
    SharedVars shared;
    std::vector<NodeId> dom;
    IntervalSet constrained;
};

/// Runs N2, N3, R1..R11 in order against a fixed cache. Pure apart from the
/// random draw made when the name has to change.
Evaluation evaluate(const NodeState& s, const Estimates& est, const RuntimeParams& params, Rng& rng);

/// The frame a node broadcasts: its shared variables plus relayed copies of
/// everything in its two-hop estimate.
Frame make_frame(const NodeState& s, const Estimates& est);

/// Ages the cache, evaluates all commands and returns the frame to send.
/// Returns nothing when called sooner than kappa after the last broadcast.
std::optional<Frame> step(NodeState& s, Time now, const RuntimeParams& params, Rng& rng);

/// Draws the next ready time: now + kappa + U[0, beta_max], at least now+1.
Time schedule_next(Time now, const SuperframeConfig& config, Rng& rng);

}  // namespace tdma
