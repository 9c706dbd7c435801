#include "tdma/mis.hpp"

#include <algorithm>

namespace tdma {

bool mis_step(const MisView& view) {
    const auto& nb = view.neighbors;
    const bool all_larger = std::all_of(nb.begin(), nb.end(), [&](const auto& q) { return q.rank > view.me; });
    if (all_larger) return true;
    const bool smaller_leader =
        std::any_of(nb.begin(), nb.end(), [&](const auto& q) { return q.leader && q.rank < view.me; });
    if (smaller_leader) return false;
    // some neighbour is smaller and none of the smaller ones leads
    return true;
}

bool mis_legitimate_at(NodeId p, const GlobalView& view) {
    const bool lead = view.vars(p).leader;
    bool leader_neighbor = false;
    for (auto q : view.topology->neighbors(p)) leader_neighbor = leader_neighbor || view.vars(q).leader;
    return lead ? !leader_neighbor : leader_neighbor;
}

bool mis_legitimate(const GlobalView& view) {
    for (const auto& [p, _] : view.nodes)
        if (!mis_legitimate_at(p, view)) return false;
    return true;
}

}  // namespace tdma
