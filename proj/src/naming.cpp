#include "tdma/naming.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace tdma {

void NamingParams::validate() const {
    if (!(t > 3.0)) throw std::invalid_argument("naming exponent t must exceed 3");
    if (delta < 1) throw std::invalid_argument("delta must be positive");
    (void)namespace_size();
}

Name NamingParams::namespace_size() const {
    thread_local int last_delta = -1;
    thread_local double last_t = 0;
    thread_local Name last_size = 0;
    if (delta == last_delta && t == last_t) return last_size;
    const long double power = std::ceil(std::pow(static_cast<long double>(delta), static_cast<long double>(t)));
    const long double floor_size = std::pow(static_cast<long double>(delta), 3.0L) + 1.0L;
    const long double size = std::max(power, floor_size);
    if (size > static_cast<long double>(1u << 31)) throw std::invalid_argument("namespace too large for 31-bit names");
    last_delta = delta;
    last_t = t;
    last_size = static_cast<Name>(size);
    return last_size;
}

Name new_id(Name current, const std::set<Name>& cids, Name namespace_size, Rng& rng) {
    if (!cids.count(current) && current < namespace_size) return current;
    const auto taken = static_cast<Name>(std::distance(cids.begin(), cids.lower_bound(namespace_size)));
    if (taken >= namespace_size) throw NamespaceExhausted("every name in the namespace is cached nearby");
    auto k = static_cast<Name>(uniform_int(rng, 0, static_cast<std::int64_t>(namespace_size - taken) - 1));
    // k-th free name in ascending order
    for (Name c : cids) {
        if (c >= namespace_size || c > k) break;
        ++k;
    }
    return k;
}

namespace {

struct Copy {
    NodeId holder;
    NodeId origin;
};

/// Every live cached copy in the network, grouped by the name it carries.
using CopiesByName = std::unordered_map<Name, std::vector<Copy>>;

CopiesByName index_copies(const GlobalView& view) {
    CopiesByName out;
    for (const auto& [holder, obs] : view.nodes)
        for (const auto& c : obs.cache) out[c.name].push_back({holder, c.origin});
    return out;
}

// A node forwards the origins in its two-hop estimate. One whose estimate
// still reaches past its true two-hop neighbourhood, or that still holds
// entries from before time 0, runs on garbage neighbour lists and may pick
// up any origin next.
bool forwards(const GlobalView& view, NodeId r, NodeId origin) {
    const auto& obs = view.nodes.at(r);
    if (std::binary_search(obs.relays.begin(), obs.relays.end(), origin)) return true;
    for (auto q : obs.relays)
        if (!view.index->within(r, q, 2)) return true;
    for (const auto& c : obs.cache)
        if (c.stamp < 0) return true;
    return false;
}

// Whether the copy of `origin` held by `holder` can be relayed hop by hop
// into p's cache by nodes that currently forward that origin.
bool reaches(NodeId p, const Copy& c, const GlobalView& view) {
    if (!forwards(view, c.holder, c.origin)) return false;
    std::set<NodeId> seen;
    std::vector<NodeId> frontier;
    for (auto r : view.topology->neighbors(p))
        if (view.nodes.count(r) && forwards(view, r, c.origin) && seen.insert(r).second) frontier.push_back(r);
    while (!frontier.empty()) {
        const NodeId r = frontier.back();
        frontier.pop_back();
        if (r == c.holder) return true;
        for (auto x : view.topology->neighbors(r))
            if (x != p && view.nodes.count(x) && forwards(view, x, c.origin) && seen.insert(x).second)
                frontier.push_back(x);
    }
    return false;
}

bool uniq_with(NodeId p, const GlobalView& view, const CopiesByName& copies) {
    const auto& self = view.nodes.at(p);
    const Name name = self.shared.id;
    // (i) own cache free of p's name
    for (const auto& c : self.cache)
        if (c.origin != p && c.name == name) return false;
    for (auto q : view.index->n3(p)) {
        if (q == p) continue;
        const auto& other = view.nodes.at(q);
        // (ii) distinct from every three-hop neighbour
        if (other.shared.id == name) return false;
        // (iii)/(iv) q holds p's current name, learnt from p during the run;
        // a copy stamped before time 0 is initial garbage that only happens
        // to match
        const auto& cache = other.cache;
        auto it = std::lower_bound(cache.begin(), cache.end(), p,
                                   [](const CachedName& c, NodeId o) { return c.origin < o; });
        if (it == cache.end() || it->origin != p || it->name != name || it->stamp < 0) return false;
    }
    // (v) no copy carrying p's name is still on its way to p: none of a
    // three-hop neighbour, and no other copy a chain of forwarding nodes
    // could deliver
    auto it = copies.find(name);
    if (it == copies.end()) return true;
    for (const auto& c : it->second) {
        if (c.origin == p || c.holder == p) continue;
        if (view.index->within(p, c.origin, 3)) return false;
        if (reaches(p, c, view)) return false;
    }
    return true;
}

}  // namespace

bool uniq(NodeId p, const GlobalView& view) { return uniq_with(p, view, index_copies(view)); }

std::map<NodeId, bool> uniq_all(const GlobalView& view) {
    const auto copies = index_copies(view);
    std::map<NodeId, bool> out;
    for (const auto& [p, _] : view.nodes) out[p] = uniq_with(p, view, copies);
    return out;
}

IncreasingPathResult longest_increasing_path(const Topology& t, const std::map<NodeId, Name>& names) {
    IncreasingPathResult result;
    std::vector<NodeId> order = t.nodes();
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return names.at(a) < names.at(b); });
    std::map<NodeId, int> best;
    for (auto v : order) {
        int len = 1;
        for (auto u : t.neighbors(v)) {
            if (names.at(u) < names.at(v)) {
                len = std::max(len, best.at(u) + 1);
            } else if (names.at(u) == names.at(v) && u < v) {
                result.ambiguous_edges.emplace_back(u, v);
            }
        }
        best[v] = len;
        result.length = std::max(result.length, len);
    }
    return result;
}

}  // namespace tdma
