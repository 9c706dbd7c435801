#pragma once

#include <deque>
#include <map>
#include <set>
#include <vector>

#include "tdma/global_view.hpp"
#include "tdma/rng.hpp"
#include "tdma/topology.hpp"

namespace tdma::test {

inline NodeId id(std::uint32_t v) { return NodeId{v}; }

/// Nodes 0..n-1 without geometry.
inline Topology graph(int n, const std::vector<std::pair<int, int>>& edges, int delta = 8) {
    std::map<NodeId, std::optional<Position>> nodes;
    for (int i = 0; i < n; ++i) nodes[id(i)] = std::nullopt;
    std::vector<std::pair<NodeId, NodeId>> e;
    for (auto [a, b] : edges) e.emplace_back(id(a), id(b));
    return Topology(delta, nodes, e);
}

/// Independent ball oracle: plain BFS over the adjacency matrix, distance
/// at most i. p itself belongs to the ball only through a neighbour, so it
/// is dropped for i = 1 and for isolated nodes.
inline std::set<NodeId> bfs_ball(const Topology& t, NodeId p, int i) {
    std::map<NodeId, int> dist{{p, 0}};
    std::deque<NodeId> q{p};
    while (!q.empty()) {
        auto u = q.front();
        q.pop_front();
        if (dist[u] == i) continue;
        for (auto v : t.nodes())
            if (t.adjacent(u, v) && !dist.count(v)) {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
    }
    std::set<NodeId> out;
    for (auto [v, d] : dist) out.insert(v);
    if (i == 1 || t.neighbors(p).empty()) out.erase(p);
    return out;
}

/// Every labelled graph on n nodes, as edge lists over the pairs (a<b).
inline std::vector<std::vector<std::pair<int, int>>> all_graphs(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
    std::vector<std::vector<std::pair<int, int>>> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
        std::vector<std::pair<int, int>> e;
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if (mask >> k & 1) e.push_back(pairs[k]);
        out.push_back(std::move(e));
    }
    return out;
}

/// Erdos-Renyi edge list with edge probability p.
inline std::vector<std::pair<int, int>> random_edges(int n, double p, Rng& rng) {
    std::vector<std::pair<int, int>> e;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (coin(rng, p)) e.emplace_back(a, b);
    return e;
}

inline SharedVars vars_with_color(NodeId p, Color c) {
    SharedVars v;
    v.sl.self = p;
    v.color = c;
    return v;
}

/// Labels A..I, V..Y of the figure network mapped to colours.
inline std::map<NodeId, SharedVars> fig1_coloring(const std::map<char, Color>& colors) {
    std::map<NodeId, SharedVars> out;
    for (auto [label, c] : colors) out[fig1_node(label)] = vars_with_color(fig1_node(label), c);
    return out;
}

inline std::map<char, Color> fig1_left() {
    return {{'A', 0}, {'B', 1}, {'C', 2}, {'D', 3}, {'E', 4}, {'F', 1}, {'G', 0},
            {'H', 2}, {'I', 1}, {'V', 5}, {'W', 6}, {'X', 7}, {'Y', 8}};
}

inline std::map<char, Color> fig1_right() {
    auto c = fig1_left();
    c['F'] = 3;
    c['G'] = 4;
    c['H'] = 5;
    c['I'] = 6;
    return c;
}

}  // namespace tdma::test
