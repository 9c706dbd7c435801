#include "tdma/runtime.hpp"

#include <algorithm>
#include <stdexcept>

#include "tdma/coloring.hpp"
#include "tdma/mis.hpp"
#include "tdma/slots.hpp"

namespace tdma {

std::size_t RuntimeParams::cache_capacity() const {
    const auto d = static_cast<std::size_t>(delta());
    return d * d * d + d * d + d;
}

void RuntimeParams::validate() const {
    superframe.validate();
    naming.validate();
}

NodeState clean_state(NodeId id) {
    NodeState s;
    s.id = id;
    s.shared.sl.self = id;
    return s;
}

namespace {

bool strip_self(SharedVars& v, NodeId self) { return std::erase(v.sl.neighbors, self) > 0; }

Rank cached_rank(const CacheEntry& e) { return Rank{e.snapshot.id, e.origin}; }

bool live(const CacheEntry& e, Time now, const RuntimeParams& params) {
    return e.age(now) <= params.superframe.max_age_minislots();
}

bool link_fresh(const CacheEntry& e, Time now, const RuntimeParams& params) {
    return e.link_stamp && now - *e.link_stamp <= params.superframe.max_age_minislots();
}

const CacheEntry* lookup(const NodeState& s, NodeId q, Time now, const RuntimeParams& params) {
    auto it = s.cache.find(q);
    if (it == s.cache.end() || !live(it->second, now, params)) return nullptr;
    return &it->second;
}

// --- arbitrary values -----------------------------------------------------

NodeId pick(const std::vector<NodeId>& universe, Rng& rng) {
    return universe[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(universe.size()) - 1))];
}

Color random_color(const RuntimeParams& params, Rng& rng) {
    const int d = params.delta();
    return static_cast<Color>(uniform_int(rng, 0, 4 * (d * d + 1) - 1));
}

Rank random_rank(const std::vector<NodeId>& universe, const RuntimeParams& params, Rng& rng) {
    const auto name = static_cast<Name>(uniform_int(rng, 0, params.naming.namespace_size() - 1));
    return Rank{name, pick(universe, rng)};
}

IntervalSet random_intervals(Rng& rng) {
    const auto den = uniform_int(rng, 1, 64);
    std::vector<Interval> parts;
    const auto k = uniform_int(rng, 0, 3);
    for (std::int64_t i = 0; i < k; ++i) {
        auto a = uniform_int(rng, 0, den);
        auto b = uniform_int(rng, 0, den);
        if (a > b) std::swap(a, b);
        parts.push_back({Rational(a, den), Rational(b, den)});
    }
    return IntervalSet(std::move(parts));
}

std::vector<NodeId> random_subset(const std::vector<NodeId>& universe, NodeId exclude, std::int64_t max_size, Rng& rng) {
    std::set<NodeId> out;
    const auto k = uniform_int(rng, 0, max_size);
    for (std::int64_t i = 0; i < k; ++i) {
        auto q = pick(universe, rng);
        if (q != exclude) out.insert(q);
    }
    return {out.begin(), out.end()};
}

SharedVars random_shared(NodeId owner, const std::vector<NodeId>& universe, const RuntimeParams& params, Rng& rng) {
    const int d = params.delta();
    SharedVars v;
    v.sl.self = owner;
    v.sl.neighbors = random_subset(universe, owner, d, rng);
    v.id = static_cast<Name>(uniform_int(rng, 0, params.naming.namespace_size() - 1));
    v.leader = coin(rng);
    if (coin(rng)) v.min_leader = random_rank(universe, params, rng);
    if (coin(rng, 0.75)) v.color = random_color(params, rng);
    const auto setcol_size = uniform_int(rng, 0, d + 1);
    for (std::int64_t i = 0; i < setcol_size; ++i) v.setcol[pick(universe, rng)] = random_color(params, rng);
    const auto spectrum_size = uniform_int(rng, 0, 2 * d);
    for (std::int64_t i = 0; i < spectrum_size; ++i) {
        SpectrumEntry e{pick(universe, rng), random_color(params, rng), std::nullopt};
        if (coin(rng, 0.8)) e.assigner = random_rank(universe, params, rng);
        v.spectrum.push_back(e);
    }
    std::sort(v.spectrum.begin(), v.spectrum.end());
    v.spectrum.erase(std::unique(v.spectrum.begin(), v.spectrum.end()), v.spectrum.end());
    if (coin(rng, 0.75)) v.base = static_cast<int>(uniform_int(rng, 1, d * d + 1));
    v.itvl = random_intervals(rng);
    return v;
}

std::map<NodeId, CacheEntry> random_cache(NodeId owner, const std::vector<NodeId>& universe,
                                          const RuntimeParams& params, Time now, Rng& rng) {
    const int d = params.delta();
    const auto limit = std::min<std::int64_t>(static_cast<std::int64_t>(params.cache_capacity()), 2 * (d * d + d));
    const auto count = uniform_int(rng, 0, limit);
    const Time max_age = params.superframe.max_age_minislots();
    std::map<NodeId, CacheEntry> cache;
    for (std::int64_t i = 0; i < count; ++i) {
        const NodeId origin = pick(universe, rng);
        if (origin == owner) continue;
        CacheEntry e;
        e.origin = origin;
        e.snapshot = random_shared(origin, universe, params, rng);
        e.claims_self = strip_self(e.snapshot, owner);
        e.stamp = now - uniform_int(rng, 1, max_age);
        if (coin(rng)) e.link_stamp = now - uniform_int(rng, 1, max_age);
        e.hops = static_cast<int>(uniform_int(rng, 1, 3));
        cache[origin] = std::move(e);
    }
    return cache;
}

void randomize_timers(NodeState& s, const RuntimeParams& params, Time now, Rng& rng) {
    const auto& sf = params.superframe;
    s.last_broadcast = now - uniform_int(rng, 0, sf.kappa);
    s.next_ready = now + 1 + uniform_int(rng, 0, sf.kappa + sf.beta_max);
}

}  // namespace

NodeState arbitrary_state(NodeId id, const std::vector<NodeId>& universe, const RuntimeParams& params, Time now,
                          Rng& rng) {
    NodeState s = clean_state(id);
    corrupt(s, {CorruptGroup::shared, CorruptGroup::cache, CorruptGroup::timers}, universe, params, now, rng);
    return s;
}

void corrupt(NodeState& s, const std::vector<CorruptGroup>& groups, const std::vector<NodeId>& universe,
             const RuntimeParams& params, Time now, Rng& rng) {
    if (universe.empty()) throw std::invalid_argument("corruption needs a non-empty id universe");
    for (auto g : groups) {
        switch (g) {
            case CorruptGroup::shared:
                s.shared = random_shared(s.id, universe, params, rng);
                s.dom = random_subset(universe, NodeId{}, params.delta(), rng);
                s.constrained = random_intervals(rng);
                break;
            case CorruptGroup::cache:
                s.cache = random_cache(s.id, universe, params, now, rng);
                break;
            case CorruptGroup::timers:
                randomize_timers(s, params, now, rng);
                break;
        }
    }
}

void on_receive(NodeState& s, const Frame& f, Time now, const RuntimeParams& params) {
    if (f.sender == s.id) return;
    if (f.vars.sl.self != f.sender) {
        ++s.dropped_frames;
        return;
    }
    auto& direct = s.cache[f.sender];
    direct.origin = f.sender;
    direct.snapshot = f.vars;
    direct.claims_self = strip_self(direct.snapshot, s.id);
    direct.stamp = now;
    direct.link_stamp = now;
    direct.hops = 1;

    const Time max_age = params.superframe.max_age_minislots();
    for (const auto& r : f.relayed) {
        if (r.origin == s.id || r.origin == f.sender) continue;
        if (r.stamp > now || now - r.stamp > max_age) continue;
        auto it = s.cache.find(r.origin);
        if (it == s.cache.end()) {
            CacheEntry e;
            e.origin = r.origin;
            e.snapshot = r.vars;
            e.snapshot.sl.self = r.origin;
            e.snapshot.setcol.clear();
            e.snapshot.spectrum.clear();
            e.claims_self = strip_self(e.snapshot, s.id);
            e.stamp = r.stamp;
            s.cache.emplace(r.origin, std::move(e));
        } else if (r.stamp > it->second.stamp) {
            auto& snap = it->second.snapshot;
            snap.sl.neighbors = r.vars.sl.neighbors;
            it->second.claims_self = strip_self(snap, s.id);
            snap.id = r.vars.id;
            snap.leader = r.vars.leader;
            snap.min_leader = r.vars.min_leader;
            snap.color = r.vars.color;
            snap.base = r.vars.base;
            snap.itvl = r.vars.itvl;
            it->second.stamp = r.stamp;
        }
    }

    const auto capacity = params.cache_capacity();
    while (s.cache.size() > capacity) {
        // oldest stamp first; map order makes the smallest origin win ties
        auto victim = std::min_element(s.cache.begin(), s.cache.end(),
                                       [](const auto& a, const auto& b) { return a.second.stamp < b.second.stamp; });
        s.cache.erase(victim);
    }
}

void age_and_expire(NodeState& s, Time now, const RuntimeParams& params) {
    const Time max_age = params.superframe.max_age_minislots();
    std::erase_if(s.cache, [&](const auto& kv) { return kv.second.age(now) > max_age; });
    for (auto& [_, e] : s.cache)
        if (e.link_stamp && now - *e.link_stamp > max_age) e.link_stamp.reset();
}

Estimates estimate(const NodeState& s, Time now, const RuntimeParams& params) {
    Estimates est;
    for (const auto& [q, e] : s.cache)
        if (q != s.id && live(e, now, params) && link_fresh(e, now, params)) est.n1.push_back(q);
    if (est.n1.size() > static_cast<std::size_t>(params.delta())) {
        // keep the most recently heard links
        std::stable_sort(est.n1.begin(), est.n1.end(),
                         [&](NodeId a, NodeId b) { return *s.cache.at(a).link_stamp > *s.cache.at(b).link_stamp; });
        est.n1.resize(static_cast<std::size_t>(params.delta()));
        std::sort(est.n1.begin(), est.n1.end());
    }

    std::set<NodeId> n2{s.id};
    for (auto q : est.n1) {
        n2.insert(q);
        if (const auto* e = lookup(s, q, now, params)) n2.insert(e->snapshot.sl.neighbors.begin(), e->snapshot.sl.neighbors.end());
    }
    std::set<NodeId> n3 = n2;
    for (auto q : n2) {
        if (q == s.id) continue;
        if (const auto* e = lookup(s, q, now, params)) n3.insert(e->snapshot.sl.neighbors.begin(), e->snapshot.sl.neighbors.end());
    }
    est.n2.assign(n2.begin(), n2.end());
    est.n3.assign(n3.begin(), n3.end());
    for (const auto& [q, e] : s.cache)
        if (q != s.id && live(e, now, params)) est.cids.insert(e.snapshot.id);
    return est;
}

Evaluation evaluate(const NodeState& s, const Estimates& est, const RuntimeParams& params, Rng& rng) {
    Evaluation ev;
    SharedVars& v = ev.shared;
    v = s.shared;

    // N2
    v.sl.self = s.id;
    v.sl.neighbors = est.n1;

    // N3
    v.id = new_id(v.id, est.cids, params.naming.namespace_size(), rng);
    const Rank me = v.rank();

    // neighbours are by construction live cache entries
    std::vector<const CacheEntry*> nbrs;
    nbrs.reserve(est.n1.size());
    for (auto q : est.n1) nbrs.push_back(&s.cache.at(q));

    // R1-R3
    MisView mv{me, v.leader, {}};
    for (const auto* e : nbrs) mv.neighbors.push_back({cached_rank(*e), e->snapshot.leader});
    v.leader = mis_step(mv);
    mv.leader = v.leader;

    // R4-R5
    if (v.leader) {
        std::vector<DomMember> members;
        DomMember self_member{s.id, me, {}};
        for (const auto* e : nbrs) {
            for (const auto& entry : e->snapshot.spectrum)
                if (entry.node != s.id && assigned_before(entry, me) &&
                    std::binary_search(est.n2.begin(), est.n2.end(), entry.node))
                    self_member.forbidden.insert(entry.color);
        }
        members.push_back(std::move(self_member));
        for (const auto* e : nbrs) {
            if (e->snapshot.min_leader && e->snapshot.min_leader->node == s.id)
                members.push_back({e->origin, cached_rank(*e), forbidden_from_spectrum(e->origin, e->snapshot.spectrum, me)});
        }
        std::sort(members.begin(), members.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
        for (const auto& m : members) ev.dom.push_back(m.node);
        v.setcol = assign_colors(std::move(members));
    } else {
        v.setcol.clear();
    }

    // R6
    v.min_leader = compute_min_leader(mv);

    // R7
    if (v.leader) {
        v.color = v.setcol.at(s.id);
    } else if (v.min_leader) {
        if (auto it = s.cache.find(v.min_leader->node); it != s.cache.end() && it->second.link_stamp)
            if (auto c = adopt_color(s.id, it->second.snapshot.setcol)) v.color = *c;
    }

    // Collect what is known about the two-hop estimate once for R8-R10.
    std::vector<std::pair<NodeId, const CacheEntry*>> around;
    around.reserve(est.n2.size());
    for (auto q : est.n2) {
        if (q == s.id) continue;
        auto it = s.cache.find(q);
        around.emplace_back(q, it == s.cache.end() ? nullptr : &it->second);
    }

    // R8
    if (v.leader) {
        v.spectrum.clear();
    } else {
        std::vector<ColorFact> facts{{s.id, v.color, v.min_leader}};
        for (const auto& [q, e] : around)
            if (e) facts.push_back({q, e->snapshot.color, e->snapshot.min_leader});
        v.spectrum = publish_spectrum(facts);
    }

    // R9
    std::vector<std::optional<Color>> colors{v.color};
    for (const auto& [q, e] : around) colors.push_back(e ? e->snapshot.color : std::nullopt);
    if (auto b = compute_base(colors)) v.base = *b;

    // R10-R11
    ev.constrained = s.constrained;
    if (v.base && v.color) {
        std::vector<SlotPeer> peers;
        peers.reserve(around.size());
        for (const auto& [q, e] : around) {
            if (!e) {
                peers.push_back({Rank{0, q}, std::nullopt, std::nullopt, nullptr});
                continue;
            }
            peers.push_back({cached_rank(*e), e->snapshot.base, e->snapshot.color, &e->snapshot.itvl});
        }
        if (auto taken = constrained_set(SlotKey{*v.base, *v.color, me}, peers)) {
            ev.constrained = std::move(*taken);
            v.itvl = g_assign(Rational(1, *v.base), ev.constrained);
        }
    }
    return ev;
}

Frame make_frame(const NodeState& s, const Estimates& est) {
    Frame f;
    f.sender = s.id;
    f.kind = FrameKind::overhead;
    f.vars = s.shared;
    for (auto q : est.n2) {
        if (q == s.id) continue;
        auto it = s.cache.find(q);
        if (it == s.cache.end()) continue;
        RelayEntry r{q, it->second.stamp, relay_view(it->second.snapshot)};
        if (it->second.claims_self) {
            auto& nb = r.vars.sl.neighbors;
            nb.insert(std::lower_bound(nb.begin(), nb.end(), s.id), s.id);
        }
        f.relayed.push_back(std::move(r));
    }
    return f;
}

std::optional<Frame> step(NodeState& s, Time now, const RuntimeParams& params, Rng& rng) {
    if (now - s.last_broadcast < params.superframe.kappa) return std::nullopt;
    age_and_expire(s, now, params);
    const auto est = estimate(s, now, params);
    for (auto& [q, e] : s.cache) {
        if (std::binary_search(est.n1.begin(), est.n1.end(), q))
            e.hops = 1;
        else if (std::binary_search(est.n2.begin(), est.n2.end(), q))
            e.hops = 2;
        else
            e.hops = 3;
    }
    auto ev = evaluate(s, est, params, rng);
    s.shared = std::move(ev.shared);
    s.dom = std::move(ev.dom);
    s.constrained = std::move(ev.constrained);
    s.last_broadcast = now;
    return make_frame(s, est);
}

Time schedule_next(Time now, const SuperframeConfig& config, Rng& rng) {
    return std::max(now + 1, now + config.kappa + uniform_int(rng, 0, config.beta_max));
}

}  // namespace tdma
