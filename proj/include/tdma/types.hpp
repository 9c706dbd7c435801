#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>

namespace tdma {

/// Opaque, network-unique node identifier.
struct NodeId {
    std::uint32_t value = 0;

    constexpr NodeId() = default;
    constexpr explicit NodeId(std::uint32_t v) : value(v) {}

    friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;
    friend std::ostream& operator<<(std::ostream& os, NodeId id) { return os << id.value; }
};

/// Local name drawn from the namespace {0, ..., Delta-1}.
using Name = std::uint32_t;

/// Colour index. Unbounded in principle; practically below delta^2 + 1.
using Color = std::int32_t;

/// Global time on the concatenated overhead timeline, in mini-slots.
using Time = std::int64_t;

/// Superframe index.
using Superframe = std::int64_t;

/// Total order used wherever the protocol compares nodes: by name, then by
/// node id. Names are unique within three hops once naming settles, so the
/// id component only matters while names still collide.
struct Rank {
    Name name = 0;
    NodeId node;

    friend constexpr auto operator<=>(const Rank&, const Rank&) = default;
};

/// Reference to a leader as published in min_leader / spectrum entries.
using LeaderRef = Rank;

}  // namespace tdma

template <>
struct std::hash<tdma::NodeId> {
    std::size_t operator()(tdma::NodeId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
