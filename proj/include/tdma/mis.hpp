#pragma once

#include <vector>

#include "tdma/global_view.hpp"

namespace tdma {

struct MisNeighbor {
    Rank rank;
    bool leader = false;  // cached flag
};

/// What one node knows when running the leader rules: its own rank and
/// flag, and the cached rank and flag of each current neighbour.
struct MisView {
    Rank me;
    bool leader = false;
    std::vector<MisNeighbor> neighbors;
};

/// One evaluation of the three leader rules, in order. Returns the flag
/// after the step.
bool mis_step(const MisView& view);

/// Independence and domination at p, using true adjacency and the current
/// flags.
bool mis_legitimate_at(NodeId p, const GlobalView& view);
bool mis_legitimate(const GlobalView& view);

}  // namespace tdma
