#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "tdma/types.hpp"

namespace tdma {

class TopologyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Position {
    double x = 0.0;
    double y = 0.0;
};

/// Undirected graph with a uniform bound on neighbourhood size.
///
/// Immutable once constructed: every constructor path validates symmetry,
/// irreflexivity and the degree bound, and mutation returns a new value.
class Topology {
public:
    Topology() = default;

    /// Builds and validates. Throws TopologyError on any invariant breach.
    Topology(int delta,
             std::map<NodeId, std::optional<Position>> nodes,
             const std::vector<std::pair<NodeId, NodeId>>& edges,
             std::optional<double> radius = std::nullopt);

    int delta() const { return delta_; }
    std::optional<double> radius() const { return radius_; }
    std::size_t size() const { return adjacency_.size(); }

    std::vector<NodeId> nodes() const;
    bool contains(NodeId p) const { return adjacency_.count(p) != 0; }
    const std::vector<NodeId>& neighbors(NodeId p) const;
    bool adjacent(NodeId p, NodeId q) const;
    std::optional<Position> position(NodeId p) const;
    std::vector<std::pair<NodeId, NodeId>> edges() const;
    int max_degree() const;

    friend bool operator==(const Topology& a, const Topology& b);

private:
    int delta_ = 1;
    std::optional<double> radius_;
    std::map<NodeId, std::vector<NodeId>> adjacency_;
    std::map<NodeId, std::optional<Position>> positions_;
};

/// Distance-i neighbourhood, i in 1..3, by the recursive union over
/// neighbours. For i >= 2 the result contains p unless p is isolated.
std::set<NodeId> neighborhood(const Topology& t, NodeId p, int i);

/// Precomputed N^1..N^3 for every node of one topology.
class NeighborhoodIndex {
public:
    explicit NeighborhoodIndex(const Topology& t);

    const std::vector<NodeId>& n1(NodeId p) const { return sets_.at(p)[0]; }
    const std::vector<NodeId>& n2(NodeId p) const { return sets_.at(p)[1]; }
    const std::vector<NodeId>& n3(NodeId p) const { return sets_.at(p)[2]; }
    bool within(NodeId p, NodeId q, int i) const;

private:
    std::map<NodeId, std::array<std::vector<NodeId>, 3>> sets_;
};

struct GeometricSpec {
    int n = 1;
    double radius = 0.1;
    int delta = 8;
    std::uint64_t seed = 1;
};

/// Uniform placement in the unit square, unit-disk edges, then symmetric
/// pruning of the longest edges at any node whose degree exceeds delta.
Topology generate_geometric(const GeometricSpec& spec);

struct AddNode {
    NodeId id;
    Position pos;
    /// Explicit neighbours; required when the topology has no radius.
    std::optional<std::vector<NodeId>> neighbors;
};
struct RemoveNode {
    NodeId id;
};
struct MoveNode {
    NodeId id;
    Position pos;
};
using TopologyChange = std::variant<AddNode, RemoveNode, MoveNode>;

Topology mutate(const Topology& t, const TopologyChange& change);

/// Drops edges longest-first (ties by smaller id pair) until every node has
/// at most delta neighbours. Edges without geometry count as length zero.
std::vector<std::pair<NodeId, NodeId>> prune_to_degree(
    const std::map<NodeId, std::optional<Position>>& nodes,
    std::vector<std::pair<NodeId, NodeId>> edges,
    int delta);

nlohmann::json to_json(const Topology& t);
Topology topology_from_json(const nlohmann::json& j);
Topology load_topology(const std::string& path);

/// The thirteen-node star-plus-tail network of the motivating example:
/// A is adjacent to B, C, D, E, V, W, X, Y and a tail C-F-G-H-I hangs off C.
/// Ids are assigned in the order A, B, C, D, E, V, W, X, Y, F, G, H, I.
Topology fig1_topology();
NodeId fig1_node(char label);

}  // namespace tdma
