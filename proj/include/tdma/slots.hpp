#pragma once

#include <optional>
#include <vector>

#include "tdma/global_view.hpp"

namespace tdma {

/// Number of distinct colours among the node and everything within two
/// hops. Any unknown colour makes the result unknown.
std::optional<int> compute_base(const std::vector<std::optional<Color>>& n2_colors);

/// Allocation priority: larger base first, then smaller colour, then rank.
struct SlotKey {
    int base = 1;
    Color color = 0;
    Rank rank;
};
bool allocates_before(const SlotKey& q, const SlotKey& p);

struct SlotPeer {
    Rank rank;
    std::optional<int> base;
    std::optional<Color> color;
    const IntervalSet* itvl = nullptr;
};

/// Union of the intervals held by two-hop peers that allocate before `me`.
/// Unknown when any peer's base or colour is unknown.
std::optional<IntervalSet> constrained_set(const SlotKey& me, const std::vector<SlotPeer>& peers);

/// Leftmost greedy fill of the gaps of `taken` up to total length `share`.
/// Requires 0 < share <= 1.
IntervalSet g_assign(const Rational& share, const IntervalSet& taken);

/// Slot k of T belongs to the node iff (2k+1)/(2T) lies in `itvl`.
std::vector<int> discretize(const IntervalSet& itvl, int tdma_slots);

/// Per-node slot validity: disjoint from every other node within two hops,
/// total length exactly 1/base for the true base, and no free gap left in
/// the two-hop neighbourhood while the share is short.
bool slots_valid_at(NodeId p, const GlobalView& view);
bool slots_valid(const GlobalView& view);

/// True distinct-colour count within two hops of p, if all colours are set.
std::optional<int> true_base(NodeId p, const GlobalView& view);

}  // namespace tdma
