#pragma once

#include <map>
#include <optional>
#include <vector>

#include "tdma/interval_set.hpp"
#include "tdma/types.hpp"

namespace tdma {

/// The neighbour-list variable: owner plus the neighbours it claims.
struct NeighborList {
    NodeId self;
    std::vector<NodeId> neighbors;  // sorted, at most delta entries

    friend bool operator==(const NeighborList&, const NeighborList&) = default;
};

/// One spectrum tuple: a node within two hops of the publisher, its colour
/// and the leader that assigned it. A missing assigner ranks above every
/// leader, so it never lands in anyone's used set.
struct SpectrumEntry {
    NodeId node;
    Color color = 0;
    std::optional<LeaderRef> assigner;

    friend auto operator<=>(const SpectrumEntry&, const SpectrumEntry&) = default;
};

/// Every shared variable of one node, across all protocol layers.
struct SharedVars {
    NeighborList sl;
    Name id = 0;
    bool leader = false;
    std::optional<LeaderRef> min_leader;
    std::optional<Color> color;
    std::map<NodeId, Color> setcol;        // leaders only
    std::vector<SpectrumEntry> spectrum;  // sorted, unique
    std::optional<int> base;
    IntervalSet itvl;

    Rank rank() const { return Rank{id, sl.self}; }

    friend bool operator==(const SharedVars&, const SharedVars&) = default;
};

/// The subset of SharedVars relayed beyond one hop: setcol and spectrum are
/// only ever read from direct neighbours.
SharedVars relay_view(const SharedVars& v);

}  // namespace tdma
