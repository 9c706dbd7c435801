#include "tdma/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

#include "tdma/rng.hpp"

namespace tdma {

namespace {

double edge_length(const std::map<NodeId, std::optional<Position>>& nodes, NodeId a, NodeId b) {
    const auto& pa = nodes.at(a);
    const auto& pb = nodes.at(b);
    if (!pa || !pb) return 0.0;
    return std::hypot(pa->x - pb->x, pa->y - pb->y);
}

std::pair<NodeId, NodeId> ordered(NodeId a, NodeId b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

Topology::Topology(int delta,
                   std::map<NodeId, std::optional<Position>> nodes,
                   const std::vector<std::pair<NodeId, NodeId>>& edges,
                   std::optional<double> radius)
    : delta_(delta), radius_(radius), positions_(std::move(nodes)) {
    if (delta_ < 1) throw TopologyError("delta must be positive");
    if (radius_ && !(*radius_ > 0.0)) throw TopologyError("radius must be positive");
    for (const auto& [id, pos] : positions_) adjacency_[id];
    for (auto [a, b] : edges) {
        if (a == b) throw TopologyError("self-loop at node " + std::to_string(a.value));
        if (!contains(a) || !contains(b)) throw TopologyError("edge references unknown node");
        auto& na = adjacency_[a];
        auto& nb = adjacency_[b];
        if (std::find(na.begin(), na.end(), b) != na.end()) continue;  // duplicate edge
        na.push_back(b);
        nb.push_back(a);
    }
    for (auto& [id, nbrs] : adjacency_) {
        std::sort(nbrs.begin(), nbrs.end());
        if (static_cast<int>(nbrs.size()) > delta_)
            throw TopologyError("node " + std::to_string(id.value) + " has degree " + std::to_string(nbrs.size()) +
                                " > delta " + std::to_string(delta_));
    }
}

std::vector<NodeId> Topology::nodes() const {
    std::vector<NodeId> out;
    out.reserve(adjacency_.size());
    for (const auto& [id, _] : adjacency_) out.push_back(id);
    return out;
}

const std::vector<NodeId>& Topology::neighbors(NodeId p) const {
    auto it = adjacency_.find(p);
    if (it == adjacency_.end()) throw TopologyError("unknown node " + std::to_string(p.value));
    return it->second;
}

bool Topology::adjacent(NodeId p, NodeId q) const {
    const auto& n = neighbors(p);
    return std::binary_search(n.begin(), n.end(), q);
}

std::optional<Position> Topology::position(NodeId p) const {
    auto it = positions_.find(p);
    if (it == positions_.end()) throw TopologyError("unknown node " + std::to_string(p.value));
    return it->second;
}

std::vector<std::pair<NodeId, NodeId>> Topology::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (const auto& [a, nbrs] : adjacency_)
        for (auto b : nbrs)
            if (a < b) out.emplace_back(a, b);
    return out;
}

int Topology::max_degree() const {
    std::size_t d = 0;
    for (const auto& [_, nbrs] : adjacency_) d = std::max(d, nbrs.size());
    return static_cast<int>(d);
}

bool operator==(const Topology& a, const Topology& b) {
    if (a.delta_ != b.delta_ || a.radius_ != b.radius_ || a.adjacency_ != b.adjacency_) return false;
    if (a.positions_.size() != b.positions_.size()) return false;
    for (const auto& [id, pa] : a.positions_) {
        const auto& pb = b.positions_.at(id);
        if (pa.has_value() != pb.has_value()) return false;
        if (pa && (pa->x != pb->x || pa->y != pb->y)) return false;
    }
    return true;
}

std::set<NodeId> neighborhood(const Topology& t, NodeId p, int i) {
    if (!t.contains(p)) throw TopologyError("unknown node " + std::to_string(p.value));
    if (i < 1 || i > 3) throw TopologyError("neighbourhood radius must be in 1..3");
    const auto& n1 = t.neighbors(p);
    std::set<NodeId> current(n1.begin(), n1.end());
    for (int level = 2; level <= i; ++level) {
        std::set<NodeId> next = current;
        for (auto q : current)
            for (auto r : t.neighbors(q)) next.insert(r);
        current = std::move(next);
    }
    return current;
}

NeighborhoodIndex::NeighborhoodIndex(const Topology& t) {
    for (auto p : t.nodes()) {
        auto& sets = sets_[p];
        for (int i = 1; i <= 3; ++i) {
            auto s = neighborhood(t, p, i);
            sets[i - 1].assign(s.begin(), s.end());
        }
    }
}

bool NeighborhoodIndex::within(NodeId p, NodeId q, int i) const {
    const auto& s = sets_.at(p)[i - 1];
    return std::binary_search(s.begin(), s.end(), q);
}

std::vector<std::pair<NodeId, NodeId>> prune_to_degree(const std::map<NodeId, std::optional<Position>>& nodes,
                                                       std::vector<std::pair<NodeId, NodeId>> edges,
                                                       int delta) {
    for (auto& e : edges) e = ordered(e.first, e.second);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::map<NodeId, int> degree;
    for (auto [a, b] : edges) {
        ++degree[a];
        ++degree[b];
    }
    // Longest first; among equal lengths the smaller id pair goes first.
    std::vector<std::tuple<double, std::pair<NodeId, NodeId>>> by_length;
    by_length.reserve(edges.size());
    for (auto e : edges) by_length.emplace_back(edge_length(nodes, e.first, e.second), e);
    std::stable_sort(by_length.begin(), by_length.end(), [](const auto& x, const auto& y) {
        if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
        return std::get<1>(x) < std::get<1>(y);
    });

    std::set<std::pair<NodeId, NodeId>> removed;
    for (const auto& [len, e] : by_length) {
        if (degree[e.first] > delta || degree[e.second] > delta) {
            removed.insert(e);
            --degree[e.first];
            --degree[e.second];
        }
    }
    std::vector<std::pair<NodeId, NodeId>> kept;
    for (auto e : edges)
        if (!removed.count(e)) kept.push_back(e);
    return kept;
}

namespace {

std::vector<std::pair<NodeId, NodeId>> disk_edges(const std::map<NodeId, std::optional<Position>>& nodes,
                                                  double radius) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (auto a = nodes.begin(); a != nodes.end(); ++a)
        for (auto b = std::next(a); b != nodes.end(); ++b)
            if (a->second && b->second && edge_length(nodes, a->first, b->first) <= radius)
                edges.emplace_back(a->first, b->first);
    return edges;
}

std::map<NodeId, std::optional<Position>> positions_of(const Topology& t) {
    std::map<NodeId, std::optional<Position>> out;
    for (auto p : t.nodes()) out[p] = t.position(p);
    return out;
}

}  // namespace

Topology generate_geometric(const GeometricSpec& spec) {
    if (spec.n < 1) throw TopologyError("geometric spec needs n >= 1");
    if (!(spec.radius > 0.0)) throw TopologyError("geometric spec needs radius > 0");
    auto rng = make_rng(spec.seed, {0x70706f});
    std::map<NodeId, std::optional<Position>> nodes;
    for (int i = 0; i < spec.n; ++i) {
        double x = uniform_unit(rng);
        double y = uniform_unit(rng);
        nodes[NodeId(static_cast<std::uint32_t>(i))] = Position{x, y};
    }
    auto edges = prune_to_degree(nodes, disk_edges(nodes, spec.radius), spec.delta);
    return Topology(spec.delta, std::move(nodes), edges, spec.radius);
}

Topology mutate(const Topology& t, const TopologyChange& change) {
    auto nodes = positions_of(t);
    auto edges = t.edges();

    auto rebuild = [&](std::vector<std::pair<NodeId, NodeId>> candidate) {
        return Topology(t.delta(), nodes, prune_to_degree(nodes, std::move(candidate), t.delta()), t.radius());
    };

    return std::visit(
        [&](const auto& c) -> Topology {
            using C = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<C, RemoveNode>) {
                if (!t.contains(c.id)) throw TopologyError("remove: unknown node " + std::to_string(c.id.value));
                nodes.erase(c.id);
                std::erase_if(edges, [&](auto e) { return e.first == c.id || e.second == c.id; });
                return Topology(t.delta(), nodes, edges, t.radius());
            } else if constexpr (std::is_same_v<C, AddNode>) {
                if (t.contains(c.id)) throw TopologyError("add: node already present " + std::to_string(c.id.value));
                nodes[c.id] = c.pos;
                if (c.neighbors) {
                    for (auto q : *c.neighbors) {
                        if (!t.contains(q)) throw TopologyError("add: unknown neighbour " + std::to_string(q.value));
                        edges.emplace_back(c.id, q);
                    }
                    return rebuild(edges);
                }
                if (!t.radius()) throw TopologyError("add: topology has no radius; give explicit neighbours");
                for (const auto& [q, pos] : nodes)
                    if (q != c.id && pos && std::hypot(pos->x - c.pos.x, pos->y - c.pos.y) <= *t.radius())
                        edges.emplace_back(c.id, q);
                return rebuild(edges);
            } else {
                if (!t.contains(c.id)) throw TopologyError("move: unknown node " + std::to_string(c.id.value));
                if (!t.radius()) throw TopologyError("move: topology has no radius");
                nodes[c.id] = c.pos;
                return rebuild(disk_edges(nodes, *t.radius()));
            }
        },
        change);
}

nlohmann::json to_json(const Topology& t) {
    nlohmann::json j;
    j["delta"] = t.delta();
    if (t.radius()) j["radius"] = *t.radius();
    auto nodes = nlohmann::json::array();
    for (auto p : t.nodes()) {
        nlohmann::json n{{"id", p.value}};
        if (auto pos = t.position(p)) {
            n["x"] = pos->x;
            n["y"] = pos->y;
        }
        nodes.push_back(std::move(n));
    }
    j["nodes"] = std::move(nodes);
    auto edges = nlohmann::json::array();
    for (auto [a, b] : t.edges()) edges.push_back({a.value, b.value});
    j["edges"] = std::move(edges);
    return j;
}

Topology topology_from_json(const nlohmann::json& j) {
    try {
        int delta = j.at("delta").get<int>();
        std::map<NodeId, std::optional<Position>> nodes;
        for (const auto& n : j.at("nodes")) {
            NodeId id(n.at("id").get<std::uint32_t>());
            if (nodes.count(id)) throw TopologyError("duplicate node id " + std::to_string(id.value));
            std::optional<Position> pos;
            if (n.contains("x") && n.contains("y")) pos = Position{n["x"].get<double>(), n["y"].get<double>()};
            nodes[id] = pos;
        }
        std::vector<std::pair<NodeId, NodeId>> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw TopologyError("edge must be a pair of ids");
            edges.emplace_back(NodeId(e[0].get<std::uint32_t>()), NodeId(e[1].get<std::uint32_t>()));
        }
        std::optional<double> radius;
        if (j.contains("radius")) radius = j["radius"].get<double>();
        return Topology(delta, std::move(nodes), edges, radius);
    } catch (const nlohmann::json::exception& e) {
        throw TopologyError(std::string("malformed topology: ") + e.what());
    }
}

Topology load_topology(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TopologyError("cannot open topology file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw TopologyError("cannot parse topology file " + path + ": " + e.what());
    }
    return topology_from_json(j);
}

namespace {
constexpr std::string_view kFig1Labels = "ABCDEVWXYFGHI";
}

NodeId fig1_node(char label) {
    auto pos = kFig1Labels.find(label);
    if (pos == std::string_view::npos) throw TopologyError(std::string("no such fixture node ") + label);
    return NodeId(static_cast<std::uint32_t>(pos));
}

Topology fig1_topology() {
    std::map<NodeId, std::optional<Position>> nodes;
    for (char c : kFig1Labels) nodes[fig1_node(c)] = std::nullopt;
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (char spoke : std::string_view("BCDEVWXY")) edges.emplace_back(fig1_node('A'), fig1_node(spoke));
    for (auto [a, b] : {std::pair{'C', 'F'}, {'F', 'G'}, {'G', 'H'}, {'H', 'I'}})
        edges.emplace_back(fig1_node(a), fig1_node(b));
    return Topology(8, std::move(nodes), edges);
}

}  // namespace tdma
