#pragma once

#include <set>
#include <stdexcept>
#include <vector>

#include "tdma/global_view.hpp"
#include "tdma/rng.hpp"

namespace tdma {

class NamespaceExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Namespace sizing: Delta = ceil(delta^t), raised to delta^3 + 1 when the
/// power falls short (only happens for delta = 1).
struct NamingParams {
    double t = 6.0;
    int delta = 8;

    /// Throws std::invalid_argument unless t > 3 and delta >= 1.
    void validate() const;
    Name namespace_size() const;
};

/// Keeps `current` unless it collides with `cids`; otherwise draws uniformly
/// from {0..Delta-1} minus `cids`. Throws NamespaceExhausted if no name is free.
Name new_id(Name current, const std::set<Name>& cids, Name namespace_size, Rng& rng);

/// Omniscient uniqueness predicate for node p. Checks that p's name is
/// absent from its own cache, differs from every other name within three
/// hops, is cached correctly by every node within three hops, and that no
/// live cached copy that could still reach p carries p's name: neither a
/// copy of a three-hop neighbour anywhere, nor any copy that nodes
/// forwarding its origin could relay into p's cache.
bool uniq(NodeId p, const GlobalView& view);

/// uniq for every node, sharing one index of cached copies.
std::map<NodeId, bool> uniq_all(const GlobalView& view);

struct IncreasingPathResult {
    int length = 0;  // node count of the longest strictly increasing path
    std::vector<std::pair<NodeId, NodeId>> ambiguous_edges;  // equal names, excluded
};

IncreasingPathResult longest_increasing_path(const Topology& t, const std::map<NodeId, Name>& names);

}  // namespace tdma
