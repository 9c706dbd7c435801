#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tdma/global_view.hpp"

namespace tdma {

class OracleSizeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Every maximal independent set, by exhaustive subset enumeration.
/// Throws OracleSizeError above `max_nodes`.
std::vector<std::set<NodeId>> brute_force_mis(const Topology& t, std::size_t max_nodes = 10);

/// Exact minimum colour count such that nodes within two hops differ.
/// Backtracking over the square graph; throws OracleSizeError above
/// `max_nodes`.
int brute_force_min_d2_coloring(const Topology& t, std::size_t max_nodes = 16);

/// Layer predicates at one node. Each flag already includes the layers
/// below it, so slots implies color implies mis implies uniq.
struct LayerFlags {
    bool uniq = false;
    bool mis = false;
    bool color = false;
    bool slots = false;

    bool operator[](int layer) const;
    friend bool operator==(const LayerFlags&, const LayerFlags&) = default;
};

inline constexpr int kLayers = 4;
inline constexpr const char* kLayerNames[kLayers] = {"uniq", "mis", "color", "slots"};

/// Raw uniq flags as well as the cumulative layers, for every node.
struct PredicateSnapshot {
    std::map<NodeId, LayerFlags> layers;
    std::map<NodeId, bool> raw_uniq;
};
PredicateSnapshot evaluate_predicates(const GlobalView& view);

/// Retrospective convergence bookkeeping across a run.
///
/// A node's local time for a layer is the first superframe after its last
/// recorded violation. It only counts if at least `guard_band` superframes
/// were recorded after it.
class ConvergenceTracker {
public:
    explicit ConvergenceTracker(Superframe guard_band = 50) : guard_band_(guard_band) {}

    void record(Superframe sf, const PredicateSnapshot& preds);
    /// Nodes that left the network stop being tracked.
    void forget(NodeId p);

    Superframe guard_band() const { return guard_band_; }
    std::optional<Superframe> last_recorded() const { return last_; }
    std::optional<Superframe> local_time(NodeId p, int layer) const;
    /// Max over nodes of the overall (slots) layer; unset if any node has
    /// not converged.
    std::optional<Superframe> global_time() const;
    std::vector<NodeId> nodes() const;
    /// true -> false transitions of the raw uniq predicate, per node.
    const std::map<NodeId, int>& uniq_regressions() const { return uniq_regressions_; }

private:
    struct NodeTrack {
        Superframe first = 0;
        std::array<std::optional<Superframe>, kLayers> last_false{};
        bool uniq_prev = false;
    };
    Superframe guard_band_;
    std::optional<Superframe> last_;
    std::map<NodeId, NodeTrack> tracks_;
    std::map<NodeId, int> uniq_regressions_;
};

/// End-of-run verdict per node plus convergence times.
struct LegitimacyReport {
    std::map<NodeId, LayerFlags> final_flags;
    std::map<NodeId, std::array<std::optional<Superframe>, kLayers>> local_times;
    std::optional<Superframe> global_time;
    std::vector<std::string> violations;

    bool all_legitimate() const;
};
LegitimacyReport make_report(const GlobalView& final_view, const ConvergenceTracker& tracker);

struct TdmaCollision {
    Superframe superframe = 0;
    int slot = 0;
    NodeId receiver;
};

/// True iff every listed collision happened at a receiver within three hops
/// (in `before`, the topology prior to the crash) of some crashed node.
bool collision_containment(const Topology& before, const std::vector<TdmaCollision>& post_crash,
                           const std::set<NodeId>& crashed);

/// Collisions whose receiver lies outside the crashed nodes' three-hop zone.
std::vector<TdmaCollision> uncontained(const Topology& before, const std::vector<TdmaCollision>& post_crash,
                                       const std::set<NodeId>& crashed);

}  // namespace tdma
