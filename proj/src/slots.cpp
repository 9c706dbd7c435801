#include "tdma/slots.hpp"

#include <set>
#include <stdexcept>

namespace tdma {

std::optional<int> compute_base(const std::vector<std::optional<Color>>& n2_colors) {
    std::set<Color> distinct;
    for (const auto& c : n2_colors) {
        if (!c) return std::nullopt;
        distinct.insert(*c);
    }
    if (distinct.empty()) return std::nullopt;
    return static_cast<int>(distinct.size());
}

bool allocates_before(const SlotKey& q, const SlotKey& p) {
    if (q.base != p.base) return q.base > p.base;
    if (q.color != p.color) return q.color < p.color;
    return q.rank < p.rank;
}

std::optional<IntervalSet> constrained_set(const SlotKey& me, const std::vector<SlotPeer>& peers) {
    std::vector<Interval> taken;
    for (const auto& q : peers) {
        if (!q.base || !q.color || !q.itvl) return std::nullopt;
        if (allocates_before(SlotKey{*q.base, *q.color, q.rank}, me))
            taken.insert(taken.end(), q.itvl->intervals().begin(), q.itvl->intervals().end());
    }
    return IntervalSet(std::move(taken));
}

IntervalSet g_assign(const Rational& share, const IntervalSet& taken) {
    if (share <= 0 || share > 1) throw std::invalid_argument("share must lie in (0,1]");
    std::vector<Interval> out;
    Rational left = share;
    const auto free = taken.complement();
    for (const auto& gap : free.intervals()) {
        if (left == 0) break;
        if (gap.length() <= left) {
            out.push_back(gap);
            left -= gap.length();
        } else {
            out.push_back({gap.lo, gap.lo + left});
            left = 0;
        }
    }
    return IntervalSet(std::move(out));
}

std::vector<int> discretize(const IntervalSet& itvl, int tdma_slots) {
    // lo <= (2k+1)/(2T) < hi  <=>  T*lo - 1/2 <= k < T*hi - 1/2
    std::vector<int> out;
    const Rational half(1, 2);
    for (const auto& iv : itvl.intervals()) {
        const Rational a = iv.lo * tdma_slots - half;
        const Rational b = iv.hi * tdma_slots - half;
        long long first = 0;
        if (a > 0) {
            first = static_cast<long long>(a.numerator() / a.denominator());
            if (Rational(first) < a) ++first;
        }
        for (long long k = first; k < tdma_slots && Rational(k) < b; ++k) out.push_back(static_cast<int>(k));
    }
    return out;
}

std::optional<int> true_base(NodeId p, const GlobalView& view) {
    // an isolated node has an empty two-hop neighbourhood but still counts
    std::vector<std::optional<Color>> colors{view.vars(p).color};
    for (auto q : view.index->n2(p))
        if (q != p) colors.push_back(view.vars(q).color);
    return compute_base(colors);
}

bool slots_valid_at(NodeId p, const GlobalView& view) {
    const auto& vp = view.vars(p);
    auto base = true_base(p, view);
    if (!base || vp.base != base) return false;
    IntervalSet around = vp.itvl;
    for (auto q : view.index->n2(p)) {
        if (q == p) continue;
        const auto& iq = view.vars(q).itvl;
        if (vp.itvl.intersects(iq)) return false;
        around = around.unite(iq);
    }
    const Rational share = vp.itvl.measure();
    if (share != Rational(1, *base)) return false;
    if (share < Rational(1, *base) && !around.complement().empty()) return false;
    return true;
}

bool slots_valid(const GlobalView& view) {
    for (const auto& [p, _] : view.nodes)
        if (!slots_valid_at(p, view)) return false;
    return true;
}

}  // namespace tdma
