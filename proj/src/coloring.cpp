#include "tdma/coloring.hpp"

#include <algorithm>

namespace tdma {

std::optional<LeaderRef> compute_min_leader(const MisView& view) {
    std::optional<LeaderRef> best;
    if (view.leader) best = view.me;
    for (const auto& q : view.neighbors)
        if (q.leader && (!best || q.rank < *best)) best = q.rank;
    return best;
}

bool assigned_before(const SpectrumEntry& e, const Rank& p) { return e.assigner && *e.assigner < p; }

std::set<Color> used_colors(const Rank& me, const std::vector<const std::vector<SpectrumEntry>*>& neighbor_spectra) {
    std::set<Color> used;
    for (const auto* spectrum : neighbor_spectra)
        for (const auto& e : *spectrum)
            if (assigned_before(e, me)) used.insert(e.color);
    return used;
}

std::vector<Color> f_assign(std::size_t dom_size, const std::set<Color>& used) {
    std::vector<Color> out;
    out.reserve(dom_size);
    for (Color c = 0; out.size() < dom_size; ++c)
        if (!used.count(c)) out.push_back(c);
    return out;
}

std::map<NodeId, Color> assign_colors(std::vector<DomMember> dom) {
    std::sort(dom.begin(), dom.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
    std::map<NodeId, Color> out;
    std::set<Color> taken;
    for (const auto& m : dom) {
        Color c = 0;
        while (taken.count(c) || m.forbidden.count(c)) ++c;
        taken.insert(c);
        out[m.node] = c;
    }
    return out;
}

std::set<Color> forbidden_from_spectrum(NodeId x, const std::vector<SpectrumEntry>& spectrum_x, const Rank& leader) {
    std::set<Color> out;
    for (const auto& e : spectrum_x)
        if (e.node != x && assigned_before(e, leader)) out.insert(e.color);
    return out;
}

std::optional<Color> adopt_color(NodeId me, const std::map<NodeId, Color>& leader_setcol) {
    if (auto it = leader_setcol.find(me); it != leader_setcol.end()) return it->second;
    return std::nullopt;
}

std::vector<SpectrumEntry> publish_spectrum(const std::vector<ColorFact>& facts) {
    std::vector<SpectrumEntry> out;
    out.reserve(facts.size());
    for (const auto& f : facts)
        if (f.color) out.push_back(SpectrumEntry{f.node, *f.color, f.min_leader});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool coloring_valid_at(NodeId p, const GlobalView& view) {
    const auto& cp = view.vars(p).color;
    if (!cp) return false;
    for (auto q : view.index->n2(p)) {
        if (q == p) continue;
        const auto& cq = view.vars(q).color;
        if (!cq || *cq == *cp) return false;
    }
    return true;
}

bool coloring_valid(const GlobalView& view) {
    for (const auto& [p, _] : view.nodes)
        if (!coloring_valid_at(p, view)) return false;
    return true;
}

namespace {

// Colours within two hops of x (x excluded) whose holder's min-leader ranks
// below `leader`.
std::set<Color> true_forbidden(NodeId x, const Rank& leader, const GlobalView& view) {
    std::set<Color> out;
    for (auto y : view.index->n2(x)) {
        if (y == x) continue;
        const auto& v = view.vars(y);
        if (v.color && v.min_leader && *v.min_leader < leader) out.insert(*v.color);
    }
    return out;
}

}  // namespace

std::map<NodeId, Color> expected_setcol(NodeId leader, const GlobalView& view) {
    const auto& lv = view.vars(leader);
    const Rank me = lv.rank();
    std::vector<DomMember> dom{{leader, me, true_forbidden(leader, me, view)}};
    for (auto q : view.topology->neighbors(leader)) {
        const auto& qv = view.vars(q);
        if (qv.min_leader && qv.min_leader->node == leader) dom.push_back({q, qv.rank(), true_forbidden(q, me, view)});
    }
    return assign_colors(std::move(dom));
}

bool coloring_locally_minimal(const GlobalView& view) {
    for (const auto& [p, obs] : view.nodes) {
        if (!obs.shared.color) return false;
        const Color cp = *obs.shared.color;
        std::set<Color> around;
        for (auto q : view.index->n2(p))
            if (q != p && view.vars(q).color) around.insert(*view.vars(q).color);
        for (Color c = 0; c < cp; ++c)
            if (!around.count(c)) return false;
    }
    for (const auto& [p, obs] : view.nodes) {
        if (!obs.shared.leader) continue;
        auto expected = expected_setcol(p, view);
        if (obs.shared.setcol != expected) return false;
        for (const auto& [q, c] : expected)
            if (view.vars(q).color != c) return false;
    }
    return true;
}

}  // namespace tdma
