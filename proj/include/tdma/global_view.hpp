#pragma once

#include <map>
#include <memory>
#include <vector>

#include "tdma/shared_vars.hpp"
#include "tdma/topology.hpp"

namespace tdma {

/// A live cached name held by some node.
struct CachedName {
    NodeId origin;
    Name name = 0;
    Time stamp = 0;

    friend bool operator==(const CachedName&, const CachedName&) = default;
};

/// What an omniscient observer sees of one node: its shared variables, the
/// names in its live cache (sorted by origin) and the origins whose copies
/// it currently forwards (sorted).
struct NodeObservation {
    SharedVars shared;
    std::vector<CachedName> cache;
    std::vector<NodeId> relays;

    friend bool operator==(const NodeObservation&, const NodeObservation&) = default;
};

/// Frozen snapshot of the whole network. Built from a live simulation or
/// from a recorded trace; every legitimacy checker reads only this.
struct GlobalView {
    std::shared_ptr<const Topology> topology;
    std::shared_ptr<const NeighborhoodIndex> index;
    std::map<NodeId, NodeObservation> nodes;
    Superframe superframe = 0;

    const SharedVars& vars(NodeId p) const { return nodes.at(p).shared; }
};

/// Convenience for tests: a view over a topology with the given shared
/// variables and empty caches.
GlobalView make_view(const Topology& t, std::map<NodeId, SharedVars> vars);

}  // namespace tdma
