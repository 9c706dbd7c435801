#include <gtest/gtest.h>

#include "tdma/slots.hpp"
#include "test_util.hpp"

using namespace tdma;
using tdma::test::graph;
using tdma::test::id;

namespace {

IntervalSet set_of(std::initializer_list<std::pair<Rational, Rational>> ivs) {
    std::vector<Interval> v;
    for (auto [a, b] : ivs) v.push_back({a, b});
    return IntervalSet(v);
}

Rational r(long long n, long long d) { return Rational(n, d); }

// Fills base and itvl for a coloured view by allocating every node once in
// global priority order. Each node's constraint only involves nodes that
// allocate before it, so one pass reaches the fixed point.
void allocate(GlobalView& v) {
    std::vector<NodeId> order;
    for (auto& [p, obs] : v.nodes) {
        obs.shared.base = true_base(p, v);
        order.push_back(p);
    }
    auto key = [&](NodeId p) {
        const auto& s = v.vars(p);
        return SlotKey{*s.base, *s.color, s.rank()};
    };
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return allocates_before(key(a), key(b)); });
    for (auto p : order) {
        std::vector<SlotPeer> peers;
        for (auto q : v.index->n2(p))
            if (q != p) peers.push_back({v.vars(q).rank(), v.vars(q).base, v.vars(q).color, &v.vars(q).itvl});
        auto taken = constrained_set(key(p), peers);
        v.nodes[p].shared.itvl = g_assign(Rational(1, *v.vars(p).base), *taken);
    }
}

}  // namespace

TEST(Slots, BaseFromFigureColorings) {
    auto t = fig1_topology();
    auto right = make_view(t, tdma::test::fig1_coloring(tdma::test::fig1_right()));
    const std::map<char, int> want{{'F', 5}, {'G', 5}, {'H', 4}, {'I', 3}};
    for (auto [label, base] : want) EXPECT_EQ(true_base(fig1_node(label), right), base) << label;
    for (char c : std::string("ABCDEVWXY")) EXPECT_EQ(true_base(fig1_node(c), right), 9) << c;

    EXPECT_EQ(compute_base({3, 5, 2, 6, 4}), 5);
    EXPECT_EQ(compute_base({5, 4, 6}), 3);
    EXPECT_EQ(compute_base({1, 1, 0}), 2);
    EXPECT_EQ(compute_base({1, std::nullopt}), std::nullopt);
}

TEST(Slots, AllocationOrder) {
    EXPECT_TRUE(allocates_before({5, 3, {}}, {4, 0, {}}));
    EXPECT_TRUE(allocates_before({4, 2, {}}, {4, 5, {}}));
    EXPECT_TRUE(allocates_before({4, 2, Rank{1, id(0)}}, {4, 2, Rank{2, id(0)}}));
    EXPECT_FALSE(allocates_before({4, 2, Rank{1, id(0)}}, {4, 2, Rank{1, id(0)}}));
}

TEST(Slots, ConstrainedSet) {
    auto quarter = set_of({{r(0, 1), r(1, 4)}});
    SlotKey me{4, 5, Rank{3, id(0)}};
    EXPECT_TRUE(constrained_set(SlotKey{9, 0, {}}, {{Rank{}, 4, 1, &quarter}})->empty());
    EXPECT_EQ(constrained_set(me, {{Rank{1, id(1)}, 6, 9, &quarter}}), quarter);
    EXPECT_EQ(constrained_set(me, {{Rank{1, id(1)}, 4, 2, &quarter}}), quarter);
    EXPECT_TRUE(constrained_set(me, {{Rank{1, id(1)}, 4, 7, &quarter}})->empty());
    EXPECT_EQ(constrained_set(me, {{Rank{1, id(1)}, std::nullopt, 2, &quarter}}), std::nullopt);
}

TEST(Slots, GreedyFill) {
    EXPECT_EQ(g_assign(1, IntervalSet()), IntervalSet::full());
    EXPECT_EQ(g_assign(r(1, 4), set_of({{0, r(1, 2)}})), set_of({{r(1, 2), r(3, 4)}}));
    EXPECT_EQ(g_assign(r(1, 2), set_of({{r(1, 4), r(1, 2)}, {r(3, 4), r(9, 10)}})),
              set_of({{0, r(1, 4)}, {r(1, 2), r(3, 4)}}));
    // short when the free space runs out
    EXPECT_EQ(g_assign(r(1, 2), set_of({{0, r(3, 4)}})).measure(), r(1, 4));
    EXPECT_THROW(g_assign(0, IntervalSet()), std::invalid_argument);
}

TEST(Slots, GreedyFillProperties) {
    auto rng = make_rng(12);
    for (int i = 0; i < 2000; ++i) {
        std::vector<Interval> v;
        for (auto k = uniform_int(rng, 0, 3); k > 0; --k) {
            auto a = uniform_int(rng, 0, 30), b = uniform_int(rng, 0, 30);
            if (a > b) std::swap(a, b);
            v.push_back({r(a, 30), r(b, 30)});
        }
        IntervalSet taken(v);
        const Rational share(uniform_int(rng, 1, 12), 12);
        auto got = g_assign(share, taken);
        ASSERT_FALSE(got.intersects(taken));
        const Rational free = Rational(1) - taken.measure();
        ASSERT_EQ(got.measure(), share < free ? share : free);
        // leftmost: nothing free lies left of the assigned part's right end
        if (!got.empty()) {
            auto right_end = got.intervals().back().hi;
            auto left_free = taken.unite(got).complement().intersect(set_of({{0, right_end}}));
            ASSERT_TRUE(left_free.empty());
        }
    }
}

TEST(Slots, Discretize) {
    EXPECT_EQ(discretize(IntervalSet::full(), 4), (std::vector<int>{0, 1, 2, 3}));
    EXPECT_EQ(discretize(set_of({{0, r(1, 4)}}), 4), std::vector<int>{0});
    EXPECT_EQ(discretize(set_of({{r(3, 10), r(6, 10)}}), 10), (std::vector<int>{3, 4, 5}));
    EXPECT_TRUE(discretize(IntervalSet(), 8).empty());
    // brute force midpoint oracle
    auto rng = make_rng(13);
    for (int i = 0; i < 1000; ++i) {
        auto a = uniform_int(rng, 0, 40), b = uniform_int(rng, 0, 40);
        if (a > b) std::swap(a, b);
        auto s = set_of({{r(a, 40), r(b, 40)}});
        const int T = static_cast<int>(uniform_int(rng, 1, 33));
        std::vector<int> want;
        for (int k = 0; k < T; ++k)
            if (s.contains(Rational(2 * k + 1, 2 * T))) want.push_back(k);
        ASSERT_EQ(discretize(s, T), want);
    }
}

TEST(Slots, ValiditySmallCases) {
    auto single = graph(1, {});
    auto v = make_view(single, {{id(0), tdma::test::vars_with_color(id(0), 0)}});
    allocate(v);
    EXPECT_EQ(v.vars(id(0)).itvl, IntervalSet::full());
    EXPECT_TRUE(slots_valid(v));

    auto pair = graph(2, {{0, 1}});
    auto w = make_view(pair, {{id(0), tdma::test::vars_with_color(id(0), 0)},
                              {id(1), tdma::test::vars_with_color(id(1), 1)}});
    allocate(w);
    EXPECT_EQ(w.vars(id(0)).itvl.measure(), r(1, 2));
    EXPECT_EQ(w.vars(id(1)).itvl.measure(), r(1, 2));
    EXPECT_FALSE(w.vars(id(0)).itvl.intersects(w.vars(id(1)).itvl));
    EXPECT_TRUE(slots_valid(w));

    auto overlap = w;
    overlap.nodes[id(1)].shared.itvl = overlap.vars(id(0)).itvl;
    EXPECT_FALSE(slots_valid_at(id(1), overlap));
    auto wrong_base = w;
    wrong_base.nodes[id(0)].shared.base = 3;
    EXPECT_FALSE(slots_valid_at(id(0), wrong_base));
}

TEST(Slots, FigureLeftColoringShares) {
    auto v = make_view(fig1_topology(), tdma::test::fig1_coloring(tdma::test::fig1_left()));
    allocate(v);
    EXPECT_EQ(v.vars(fig1_node('I')).itvl.measure(), r(1, 3));
    EXPECT_EQ(v.vars(fig1_node('A')).itvl.measure(), r(1, 9));
    // F and I share colour 1 three hops apart and both allocate ahead of H,
    // leaving H less than 1/base. The validator reports exactly that node.
    const auto h = fig1_node('H');
    EXPECT_EQ(v.vars(h).base, 3);
    EXPECT_EQ(v.vars(h).itvl.measure(), r(2, 9));
    EXPECT_LE(v.vars(h).itvl.measure(), r(1, 4));
    for (auto p : v.topology->nodes()) EXPECT_EQ(slots_valid_at(p, v), p != h) << p;
}
