#include <algorithm>
#include <fstream>

#include "tdma/harness.hpp"
#include "tdma/slots.hpp"

namespace tdma {

using nlohmann::json;

namespace {

constexpr std::uint64_t kStepStream = 1;
constexpr std::uint64_t kInitStream = 2;
constexpr std::uint64_t kFaultStream = 3;

RuntimeParams params_for(const ExperimentConfig& c, const Topology& t) {
    RuntimeParams p;
    p.superframe = c.superframe;
    p.naming = NamingParams{c.naming_t, t.delta()};
    p.validate();
    return p;
}

}  // namespace

Simulation::Simulation(ExperimentConfig config)
    : config_(std::move(config)),
      topology_(std::make_shared<const Topology>(build_topology(config_.topology, config_.base_dir, config_.seed))),
      index_(std::make_shared<const NeighborhoodIndex>(*topology_)),
      builder_(config_.guard_band, 0) {
    config_.validate();
    params_ = params_for(config_, *topology_);
    builder_ = MetricsBuilder(config_.guard_band, params_.naming.namespace_size());
    for (auto p : topology_->nodes()) max_id_ = std::max(max_id_, p);

    const auto ids = universe();
    const auto& sf = params_.superframe;
    for (auto p : topology_->nodes()) {
        auto init = make_rng(config_.seed, {kInitStream, p.value});
        if (config_.clean_start) {
            auto s = clean_state(p);
            s.last_broadcast = -sf.kappa;
            s.next_ready = 1 + uniform_int(init, 0, sf.kappa + sf.beta_max);
            states_.emplace(p, std::move(s));
        } else {
            states_.emplace(p, arbitrary_state(p, ids, params_, 0, init));
        }
        rngs_.emplace(p, make_rng(config_.seed, {kStepStream, p.value}));
    }
    fired_.assign(config_.faults.size(), false);
}

Simulation::~Simulation() = default;

std::vector<NodeId> Simulation::universe() const {
    // Real ids plus a few that never exist, so garbage can name phantoms.
    std::vector<NodeId> ids = topology_->nodes();
    for (std::uint32_t k = 1; k <= 3; ++k) ids.emplace_back(max_id_.value + k);
    return ids;
}

void Simulation::set_trace(std::ostream* out) {
    trace_ = out;
    if (!trace_) return;
    write(json{{"type", "header"},
               {"config", to_json(config_)},
               {"topology", to_json(*topology_)},
               {"namespace_size", params_.naming.namespace_size()}});
}

void Simulation::write(const json& line) {
    if (trace_) *trace_ << line.dump() << '\n';
}

Time Simulation::observe_time() const { return next_sf_ * params_.superframe.contention_minislots - 1; }

GlobalView Simulation::view() const {
    GlobalView v;
    v.topology = topology_;
    v.index = index_;
    v.superframe = next_sf_ - 1;
    const Time now = observe_time();
    const Time max_age = params_.superframe.max_age_minislots();
    for (const auto& [p, s] : states_) {
        auto& obs = v.nodes[p];
        obs.shared = s.shared;
        obs.cache.reserve(s.cache.size());
        for (const auto& [q, e] : s.cache)
            if (q != p && e.age(now) <= max_age) obs.cache.push_back({q, e.snapshot.id, e.stamp});
        for (auto q : estimate(s, now, params_).n2)
            if (q != p) obs.relays.push_back(q);
    }
    return v;
}

void Simulation::apply_fault(std::size_t i) {
    const auto& f = config_.faults[i];
    const Superframe sf = next_sf_;
    const Time now = sf * params_.superframe.contention_minislots;
    const Topology before = *topology_;
    auto rng = make_rng(config_.seed, {kFaultStream, i});

    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, CrashFault>) {
                topology_ = std::make_shared<const Topology>(mutate(*topology_, RemoveNode{k.node}));
                states_.erase(k.node);
                rngs_.erase(k.node);
            } else if constexpr (std::is_same_v<K, CorruptFault>) {
                const auto ids = universe();
                auto targets = k.nodes.empty() ? topology_->nodes() : k.nodes;
                for (auto p : targets) {
                    auto it = states_.find(p);
                    if (it == states_.end()) throw std::invalid_argument("corrupt: unknown node " + std::to_string(p.value));
                    corrupt(it->second, k.groups, ids, params_, now, rng);
                }
            } else if constexpr (std::is_same_v<K, AddNodeFault>) {
                topology_ = std::make_shared<const Topology>(mutate(*topology_, AddNode{k.id, k.pos, k.neighbors}));
                max_id_ = std::max(max_id_, k.id);
                if (config_.clean_start) {
                    auto s = clean_state(k.id);
                    s.last_broadcast = now - params_.superframe.kappa;
                    s.next_ready = now + 1 + uniform_int(rng, 0, params_.superframe.kappa + params_.superframe.beta_max);
                    states_[k.id] = std::move(s);
                } else {
                    states_[k.id] = arbitrary_state(k.id, universe(), params_, now, rng);
                }
                rngs_.insert_or_assign(k.id, make_rng(config_.seed, {kStepStream, k.id.value}));
            } else {
                topology_ = std::make_shared<const Topology>(mutate(*topology_, MoveNode{k.node, k.pos}));
            }
        },
        f.kind);
    index_ = std::make_shared<const NeighborhoodIndex>(*topology_);
    builder_.on_fault(sf, f.kind, before);
    write(json{{"type", "fault"}, {"superframe", sf}, {"fault", to_json(f)}, {"topology", to_json(*topology_)}});
    fired_[i] = true;
    fixed_point_.reset();
    last_fault_ = sf;
}

void Simulation::advance() {
    const Superframe sf = next_sf_;
    const auto& cfg = params_.superframe;

    for (std::size_t i = 0; i < config_.faults.size(); ++i) {
        if (fired_[i]) continue;
        const auto& f = config_.faults[i];
        const bool due = f.at ? sf >= *f.at : (fixed_point_ && sf >= *fixed_point_ + *f.after_fixed_point);
        if (due) apply_fault(i);
    }

    // TDMA part: every node sends in every slot it believes it owns.
    std::map<int, std::set<NodeId>> owners;
    for (const auto& [p, s] : states_)
        for (int k : discretize(s.shared.itvl, cfg.tdma_slots)) owners[k].insert(p);
    const auto tdma_records = tdma_round(*topology_, owners, cfg);
    builder_.on_tdma(sf, tdma_records);
    if (trace_) {
        json recs = json::array();
        for (const auto& r : tdma_records) recs.push_back(to_json(r));
        write(json{{"type", "tdma"}, {"superframe", sf}, {"records", recs}});
    }

    // Overhead part on the concatenated mini-slot timeline.
    std::vector<TransmissionRecord> overhead;
    std::map<NodeId, Frame> frames;
    std::set<NodeId> senders;
    bool changed = false;
    for (int m = 0; m < cfg.contention_minislots; ++m) {
        const Time t = sf * cfg.contention_minislots + m;
        frames.clear();
        senders.clear();
        for (auto& [p, s] : states_) {
            if (s.next_ready > t) continue;
            auto& rng = rngs_.at(p);
            const SharedVars before = s.shared;
            auto f = step(s, t, params_, rng);
            changed = changed || s.shared != before;
            if (f) {
                frames.emplace(p, round_trip(*f, config_.codec));
                senders.insert(p);
                s.next_ready = schedule_next(t, cfg, rng);
            } else {
                s.next_ready = std::max(t + 1, s.last_broadcast + cfg.kappa);
            }
        }
        if (senders.empty()) continue;
        auto recs = resolve_transmissions(*topology_, senders, t);
        for (const auto& r : recs) {
            const auto& frame = frames.at(r.sender);
            for (auto q : r.receivers_ok) on_receive(states_.at(q), frame, t, params_);
        }
        overhead.insert(overhead.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
    }
    builder_.on_overhead(sf, overhead);
    if (trace_) {
        json recs = json::array();
        for (const auto& r : overhead) recs.push_back(to_json(r));
        write(json{{"type", "overhead"}, {"superframe", sf}, {"records", recs}});
    }

    next_sf_ = sf + 1;
    const auto v = view();
    const auto preds = evaluate_predicates(v);
    builder_.on_snapshot(sf, v, preds);
    if (trace_) write(snapshot_json(sf, v));

    if (!fixed_point_) {
        if (!changed && at_fixed_point()) {
            fixed_point_ = sf;
            builder_.on_fixed_point(sf);
            write(json{{"type", "fixed_point"}, {"superframe", sf}});
        }
    }
}

bool Simulation::at_fixed_point() const {
    const Time now = observe_time();
    for (const auto& [p, s] : states_) {
        const auto est = estimate(s, now, params_);
        const auto& truth = topology_->neighbors(p);
        if (est.n1 != truth) return false;
        for (auto q : index_->n3(p)) {
            if (q == p) continue;
            auto it = s.cache.find(q);
            if (it == s.cache.end() || it->second.age(now) > params_.superframe.max_age_minislots()) return false;
            SharedVars expected = states_.at(q).shared;
            std::erase(expected.sl.neighbors, p);
            const auto& got = it->second.snapshot;
            if (std::binary_search(truth.begin(), truth.end(), q)) {
                if (got != expected) return false;
            } else if (got.sl != expected.sl || got.id != expected.id || got.leader != expected.leader ||
                       got.min_leader != expected.min_leader || got.color != expected.color ||
                       got.base != expected.base || got.itvl != expected.itvl) {
                return false;
            }
        }
        Rng dry = rngs_.at(p);
        if (evaluate(s, est, params_, dry).shared != s.shared) return false;
    }
    return true;
}

bool Simulation::finished() const {
    if (next_sf_ >= config_.superframes) return true;
    if (!config_.stop_after_stable || !fixed_point_) return false;
    if (std::find(fired_.begin(), fired_.end(), false) != fired_.end()) return false;
    if (last_fault_ && next_sf_ < *last_fault_ + config_.post_fault_superframes) return false;
    return next_sf_ >= *fixed_point_ + 1 + *config_.stop_after_stable;
}

MetricsReport Simulation::metrics() const { return builder_.finish(view(), params_.superframe.tdma_slots); }

MetricsReport Simulation::run() {
    while (!finished()) advance();
    auto m = metrics();
    write(json{{"type", "metrics"}, {"metrics", to_json(m)}});
    return m;
}

MetricsReport run(const ExperimentConfig& config) {
    Simulation sim(config);
    std::ofstream trace;
    if (config.trace_path) {
        trace.open(*config.trace_path);
        if (!trace) throw std::invalid_argument("cannot write trace " + *config.trace_path);
        sim.set_trace(&trace);
    }
    auto m = sim.run();
    if (config.metrics_path) {
        std::ofstream out(*config.metrics_path);
        if (!out) throw std::invalid_argument("cannot write metrics " + *config.metrics_path);
        out << to_json(m).dump(2) << '\n';
    }
    return m;
}

}  // namespace tdma
