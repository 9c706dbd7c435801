#pragma once

#include <vector>

#include "tdma/shared_vars.hpp"

namespace tdma {

/// A cached snapshot forwarded by the sender on behalf of another node.
/// `stamp` is the global time at which the origin broadcast this value.
struct RelayEntry {
    NodeId origin;
    Time stamp = 0;
    SharedVars vars;  // relay_view() of the sender's cached copy

    friend bool operator==(const RelayEntry&, const RelayEntry&) = default;
};

enum class FrameKind { overhead, tdma };

/// One broadcast: the sender's full shared state plus its relayed view of
/// everything it believes is within two hops of itself.
struct Frame {
    NodeId sender;
    FrameKind kind = FrameKind::overhead;
    SharedVars vars;
    std::vector<RelayEntry> relayed;

    friend bool operator==(const Frame&, const Frame&) = default;
};

}  // namespace tdma
