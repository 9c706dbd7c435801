#include "tdma/global_view.hpp"

namespace tdma {

GlobalView make_view(const Topology& t, std::map<NodeId, SharedVars> vars) {
    GlobalView view;
    view.topology = std::make_shared<const Topology>(t);
    view.index = std::make_shared<const NeighborhoodIndex>(t);
    for (auto p : t.nodes()) {
        auto& obs = view.nodes[p];
        if (auto it = vars.find(p); it != vars.end()) obs.shared = std::move(it->second);
        obs.shared.sl.self = p;
    }
    return view;
}

}  // namespace tdma
