#include "tdma/validators.hpp"

#include <algorithm>
#include <functional>

#include "tdma/coloring.hpp"
#include "tdma/mis.hpp"
#include "tdma/naming.hpp"
#include "tdma/slots.hpp"

namespace tdma {

std::vector<std::set<NodeId>> brute_force_mis(const Topology& t, std::size_t max_nodes) {
    if (t.size() > max_nodes) throw OracleSizeError("brute_force_mis: too many nodes");
    const auto nodes = t.nodes();
    const std::size_t n = nodes.size();
    std::vector<std::uint32_t> adj(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (t.adjacent(nodes[i], nodes[j])) adj[i] |= 1u << j;

    std::vector<std::set<NodeId>> out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            const bool in = mask >> i & 1u;
            if (in && (adj[i] & mask)) ok = false;         // not independent
            if (!in && !(adj[i] & mask)) ok = false;       // i could be added
        }
        if (!ok) continue;
        std::set<NodeId> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u) s.insert(nodes[i]);
        out.push_back(std::move(s));
    }
    return out;
}

int brute_force_min_d2_coloring(const Topology& t, std::size_t max_nodes) {
    if (t.size() > max_nodes) throw OracleSizeError("brute_force_min_d2_coloring: too many nodes");
    if (t.size() == 0) return 0;
    auto nodes = t.nodes();
    const std::size_t n = nodes.size();
    std::map<NodeId, std::size_t> pos;
    for (std::size_t i = 0; i < n; ++i) pos[nodes[i]] = i;
    std::vector<std::vector<std::size_t>> sq(n);
    for (std::size_t i = 0; i < n; ++i)
        for (auto q : neighborhood(t, nodes[i], 2))
            if (q != nodes[i]) sq[i].push_back(pos[q]);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return sq[a].size() > sq[b].size(); });

    std::vector<int> color(n, -1);
    std::function<bool(std::size_t, int)> place = [&](std::size_t k, int colors) {
        if (k == n) return true;
        const auto v = order[k];
        for (int c = 0; c < colors; ++c) {
            bool free = true;
            for (auto u : sq[v])
                if (color[u] == c) free = false;
            if (!free) continue;
            color[v] = c;
            if (place(k + 1, colors)) return true;
            color[v] = -1;
        }
        return false;
    };
    // a node and its neighbours are pairwise within two hops
    int lower = 1;
    for (auto p : nodes) lower = std::max(lower, static_cast<int>(t.neighbors(p).size()) + 1);
    for (int k = lower;; ++k) {
        std::fill(color.begin(), color.end(), -1);
        if (place(0, k)) return k;
    }
}

bool LayerFlags::operator[](int layer) const {
    switch (layer) {
        case 0: return uniq;
        case 1: return mis;
        case 2: return color;
        default: return slots;
    }
}

PredicateSnapshot evaluate_predicates(const GlobalView& view) {
    PredicateSnapshot out;
    out.raw_uniq = uniq_all(view);
    for (const auto& [p, u] : out.raw_uniq) {
        LayerFlags f;
        f.uniq = u;
        f.mis = f.uniq && mis_legitimate_at(p, view);
        f.color = f.mis && coloring_valid_at(p, view);
        f.slots = f.color && slots_valid_at(p, view);
        out.layers[p] = f;
    }
    return out;
}

void ConvergenceTracker::record(Superframe sf, const PredicateSnapshot& preds) {
    last_ = sf;
    for (const auto& [p, flags] : preds.layers) {
        auto [it, fresh] = tracks_.try_emplace(p);
        auto& tr = it->second;
        if (fresh) tr.first = sf;
        for (int l = 0; l < kLayers; ++l)
            if (!flags[l]) tr.last_false[static_cast<std::size_t>(l)] = sf;
        const bool u = preds.raw_uniq.at(p);
        if (tr.uniq_prev && !u) ++uniq_regressions_[p];
        tr.uniq_prev = u;
    }
}

void ConvergenceTracker::forget(NodeId p) { tracks_.erase(p); }

std::optional<Superframe> ConvergenceTracker::local_time(NodeId p, int layer) const {
    auto it = tracks_.find(p);
    if (it == tracks_.end() || !last_) return std::nullopt;
    const auto& lf = it->second.last_false[static_cast<std::size_t>(layer)];
    const Superframe t = lf ? *lf + 1 : it->second.first;
    if (*last_ - t + 1 < guard_band_) return std::nullopt;
    return t;
}

std::optional<Superframe> ConvergenceTracker::global_time() const {
    Superframe worst = 0;
    for (const auto& [p, _] : tracks_) {
        auto t = local_time(p, kLayers - 1);
        if (!t) return std::nullopt;
        worst = std::max(worst, *t);
    }
    return worst;
}

std::vector<NodeId> ConvergenceTracker::nodes() const {
    std::vector<NodeId> out;
    for (const auto& [p, _] : tracks_) out.push_back(p);
    return out;
}

bool LegitimacyReport::all_legitimate() const {
    return std::all_of(final_flags.begin(), final_flags.end(), [](const auto& kv) { return kv.second.slots; });
}

LegitimacyReport make_report(const GlobalView& final_view, const ConvergenceTracker& tracker) {
    LegitimacyReport r;
    r.final_flags = evaluate_predicates(final_view).layers;
    for (auto p : tracker.nodes())
        for (int l = 0; l < kLayers; ++l) r.local_times[p][static_cast<std::size_t>(l)] = tracker.local_time(p, l);
    r.global_time = tracker.global_time();
    for (const auto& [p, f] : r.final_flags)
        for (int l = 0; l < kLayers; ++l)
            if (!f[l]) {
                r.violations.push_back("node " + std::to_string(p.value) + ": " + kLayerNames[l]);
                break;
            }
    return r;
}

std::vector<TdmaCollision> uncontained(const Topology& before, const std::vector<TdmaCollision>& post_crash,
                                       const std::set<NodeId>& crashed) {
    std::set<NodeId> zone;
    for (auto c : crashed) {
        if (!before.contains(c)) continue;
        auto n3 = neighborhood(before, c, 3);
        zone.insert(n3.begin(), n3.end());
    }
    std::vector<TdmaCollision> out;
    for (const auto& col : post_crash)
        if (!zone.count(col.receiver)) out.push_back(col);
    return out;
}

bool collision_containment(const Topology& before, const std::vector<TdmaCollision>& post_crash,
                           const std::set<NodeId>& crashed) {
    return uncontained(before, post_crash, crashed).empty();
}

}  // namespace tdma
