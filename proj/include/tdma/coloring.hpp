#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "tdma/global_view.hpp"
#include "tdma/mis.hpp"

namespace tdma {

/// Smallest-ranked leader among the node itself (if leading) and its
/// neighbours with a cached leader flag.
std::optional<LeaderRef> compute_min_leader(const MisView& view);

/// True if the entry was assigned by a leader ranked below `p`. An entry
/// without an assigner never is.
bool assigned_before(const SpectrumEntry& e, const Rank& p);

/// Colours in any neighbour spectrum whose assigner ranks below `me`.
std::set<Color> used_colors(const Rank& me, const std::vector<const std::vector<SpectrumEntry>*>& neighbor_spectra);

/// The `dom_size` smallest non-negative colours outside `used`, ascending.
std::vector<Color> f_assign(std::size_t dom_size, const std::set<Color>& used);

/// One member of a leader's domination set with the colours it must avoid.
struct DomMember {
    NodeId node;
    Rank rank;
    std::set<Color> forbidden;
};

/// Greedy assignment in ascending rank order: each member gets the smallest
/// colour outside its own forbidden set and the colours already handed out
/// in this set. With identical forbidden sets this is f_assign.
std::map<NodeId, Color> assign_colors(std::vector<DomMember> dom);

/// Colours a dominated node `x` must avoid, read from the spectrum it
/// publishes: entries about other nodes assigned by leaders below `leader`.
std::set<Color> forbidden_from_spectrum(NodeId x, const std::vector<SpectrumEntry>& spectrum_x, const Rank& leader);

/// The colour the node's min-leader prefers for it, if that leader's
/// cached setcol has an entry for `me`.
std::optional<Color> adopt_color(NodeId me, const std::map<NodeId, Color>& leader_setcol);

/// Colour facts about one node as seen by the publisher.
struct ColorFact {
    NodeId node;
    std::optional<Color> color;
    std::optional<LeaderRef> min_leader;
};

/// Sorted spectrum from the publisher's own fact and those it caches for
/// nodes within two hops. Uncoloured nodes are skipped.
std::vector<SpectrumEntry> publish_spectrum(const std::vector<ColorFact>& facts);

bool coloring_valid_at(NodeId p, const GlobalView& view);
/// No two nodes within two hops share a colour; unset colours fail.
bool coloring_valid(const GlobalView& view);

/// No node can move to a smaller colour without a two-hop clash, and every
/// leader's setcol equals the greedy assignment computed from the true
/// colours and min-leaders around its dominated nodes.
bool coloring_locally_minimal(const GlobalView& view);

/// The greedy assignment a leader would compute from true data.
std::map<NodeId, Color> expected_setcol(NodeId leader, const GlobalView& view);

}  // namespace tdma
