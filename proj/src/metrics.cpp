#include <algorithm>
#include <istream>
#include <set>

#include "tdma/coloring.hpp"
#include "tdma/harness.hpp"
#include "tdma/mis.hpp"
#include "tdma/naming.hpp"
#include "tdma/slots.hpp"

namespace tdma {

using nlohmann::json;

namespace {

json opt(const std::optional<Superframe>& v) { return v ? json(*v) : json(nullptr); }

std::optional<Superframe> opt_sf(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<Superframe>();
}

json ids_json(const std::vector<NodeId>& ids) {
    json out = json::array();
    for (auto q : ids) out.push_back(q.value);
    return out;
}

std::vector<NodeId> ids_from(const json& j) {
    std::vector<NodeId> out;
    for (const auto& v : j) out.emplace_back(v.get<std::uint32_t>());
    return out;
}

}  // namespace

bool FinalChecks::all() const {
    return uniq && mis && coloring_valid && coloring_locally_minimal && slots_valid && names_unique_n3 &&
           leaders_form_oracle_mis.value_or(true);
}

std::optional<double> MetricsReport::median_local_time() const {
    std::vector<Superframe> times;
    for (const auto& [p, t] : local_times) {
        if (!t[kLayers - 1]) return std::nullopt;
        times.push_back(*t[kLayers - 1]);
    }
    if (times.empty()) return std::nullopt;
    std::sort(times.begin(), times.end());
    const auto n = times.size();
    return n % 2 ? static_cast<double>(times[n / 2]) : (static_cast<double>(times[n / 2 - 1]) + static_cast<double>(times[n / 2])) / 2.0;
}

bool MetricsReport::passed() const {
    const bool no_regressions = uniq_regressions.empty();
    const bool contained = !containment || containment->uncontained_collisions == 0;
    return final_checks.all() && tdma_collisions_final_window == 0 && no_regressions && contained;
}

json to_json(const MetricsReport& m) {
    json local = json::array();
    for (const auto& [p, t] : m.local_times) {
        json row = json::array({p.value});
        for (const auto& v : t) row.push_back(opt(v));
        local.push_back(row);
    }
    json regress = json::array();
    for (const auto& [p, k] : m.uniq_regressions) regress.push_back({p.value, k});
    json shares = json::array();
    for (const auto& [p, s] : m.shares)
        shares.push_back({p.value, rational_to_string(s.share),
                          s.expected ? json(rational_to_string(*s.expected)) : json(nullptr), s.slots});
    const auto& f = m.final_checks;
    json j{
        {"nodes", m.nodes},
        {"superframes_run", m.superframes_run},
        {"local_times", local},
        {"global_time", opt(m.global_time)},
        {"fixed_points", m.fixed_points},
        {"overhead_collisions", m.overhead_collisions},
        {"tdma_collisions", m.tdma_collisions},
        {"tdma_collisions_final_window", m.tdma_collisions_final_window},
        {"uniq_regressions", regress},
        {"shares", shares},
        {"colors_used", m.colors_used},
        {"min_colors", m.min_colors ? json(*m.min_colors) : json(nullptr)},
        {"longest_increasing_path", m.longest_increasing_path},
        {"namespace_size", m.namespace_size},
        {"final_checks",
         {{"uniq", f.uniq},
          {"mis", f.mis},
          {"coloring_valid", f.coloring_valid},
          {"coloring_locally_minimal", f.coloring_locally_minimal},
          {"slots_valid", f.slots_valid},
          {"leaders_form_oracle_mis", f.leaders_form_oracle_mis ? json(*f.leaders_form_oracle_mis) : json(nullptr)},
          {"names_unique_n3", f.names_unique_n3}}},
        {"containment", nullptr},
        {"passed", m.passed()},
    };
    if (m.containment) {
        const auto& c = *m.containment;
        j["containment"] = {{"crash_superframe", c.crash_superframe},
                            {"crashed", ids_json(c.crashed)},
                            {"post_crash_collisions", c.post_crash_collisions},
                            {"uncontained_collisions", c.uncontained_collisions},
                            {"post_crash_superframes", c.post_crash_superframes}};
    }
    return j;
}

MetricsReport metrics_from_json(const json& j) {
    MetricsReport m;
    m.nodes = j.at("nodes").get<std::size_t>();
    m.superframes_run = j.at("superframes_run").get<Superframe>();
    for (const auto& row : j.at("local_times")) {
        auto& t = m.local_times[NodeId{row.at(0).get<std::uint32_t>()}];
        for (int l = 0; l < kLayers; ++l) t[static_cast<std::size_t>(l)] = opt_sf(row.at(static_cast<std::size_t>(l) + 1));
    }
    m.global_time = opt_sf(j.at("global_time"));
    m.fixed_points = j.at("fixed_points").get<std::vector<Superframe>>();
    m.overhead_collisions = j.at("overhead_collisions").get<std::vector<std::int64_t>>();
    m.tdma_collisions = j.at("tdma_collisions").get<std::vector<std::int64_t>>();
    m.tdma_collisions_final_window = j.at("tdma_collisions_final_window").get<std::int64_t>();
    for (const auto& r : j.at("uniq_regressions")) m.uniq_regressions[NodeId{r.at(0).get<std::uint32_t>()}] = r.at(1).get<int>();
    for (const auto& s : j.at("shares")) {
        BandwidthShare b;
        b.share = rational_from_string(s.at(1).get<std::string>());
        if (!s.at(2).is_null()) b.expected = rational_from_string(s.at(2).get<std::string>());
        b.slots = s.at(3).get<int>();
        m.shares[NodeId{s.at(0).get<std::uint32_t>()}] = b;
    }
    m.colors_used = j.at("colors_used").get<int>();
    if (!j.at("min_colors").is_null()) m.min_colors = j["min_colors"].get<int>();
    m.longest_increasing_path = j.at("longest_increasing_path").get<int>();
    m.namespace_size = j.at("namespace_size").get<Name>();
    const auto& f = j.at("final_checks");
    m.final_checks.uniq = f.at("uniq").get<bool>();
    m.final_checks.mis = f.at("mis").get<bool>();
    m.final_checks.coloring_valid = f.at("coloring_valid").get<bool>();
    m.final_checks.coloring_locally_minimal = f.at("coloring_locally_minimal").get<bool>();
    m.final_checks.slots_valid = f.at("slots_valid").get<bool>();
    if (!f.at("leaders_form_oracle_mis").is_null()) m.final_checks.leaders_form_oracle_mis = f["leaders_form_oracle_mis"].get<bool>();
    m.final_checks.names_unique_n3 = f.at("names_unique_n3").get<bool>();
    if (!j.at("containment").is_null()) {
        const auto& c = j["containment"];
        m.containment = ContainmentResult{c.at("crash_superframe").get<Superframe>(), ids_from(c.at("crashed")),
                                          c.at("post_crash_collisions").get<std::int64_t>(),
                                          c.at("uncontained_collisions").get<std::int64_t>(),
                                          c.at("post_crash_superframes").get<Superframe>()};
    }
    return m;
}

json to_json(const TransmissionRecord& r) {
    return {{"t", r.time}, {"s", r.sender.value}, {"ok", ids_json(r.receivers_ok)}, {"x", ids_json(r.collided_at)}};
}

TransmissionRecord record_from_json(const json& j) {
    return TransmissionRecord{j.at("t").get<Time>(), NodeId{j.at("s").get<std::uint32_t>()}, ids_from(j.at("ok")),
                              ids_from(j.at("x"))};
}

json snapshot_json(Superframe sf, const GlobalView& view) {
    json nodes = json::array();
    for (const auto& [p, obs] : view.nodes) {
        json cache = json::array();
        for (const auto& c : obs.cache) cache.push_back({c.origin.value, c.name, c.stamp});
        json relays = json::array();
        for (auto q : obs.relays) relays.push_back(q.value);
        nodes.push_back({{"id", p.value}, {"shared", to_json(obs.shared)}, {"cache", cache}, {"relays", relays}});
    }
    return {{"type", "snapshot"}, {"superframe", sf}, {"nodes", nodes}};
}

GlobalView view_from_snapshot(const json& j, std::shared_ptr<const Topology> topology,
                              std::shared_ptr<const NeighborhoodIndex> index) {
    GlobalView v;
    v.topology = std::move(topology);
    v.index = std::move(index);
    v.superframe = j.at("superframe").get<Superframe>();
    for (const auto& n : j.at("nodes")) {
        auto& obs = v.nodes[NodeId{n.at("id").get<std::uint32_t>()}];
        obs.shared = shared_vars_from_json(n.at("shared"));
        for (const auto& c : n.at("cache"))
            obs.cache.push_back({NodeId{c.at(0).get<std::uint32_t>()}, c.at(1).get<Name>(), c.at(2).get<Time>()});
        for (const auto& q : n.at("relays")) obs.relays.push_back(NodeId{q.get<std::uint32_t>()});
    }
    return v;
}

// --- MetricsBuilder -----------------------------------------------------------

namespace {

std::int64_t count_collisions(const std::vector<TransmissionRecord>& records,
                              std::vector<std::pair<Time, NodeId>>* out = nullptr) {
    std::vector<std::pair<Time, NodeId>> hit;
    for (const auto& r : records)
        for (auto q : r.collided_at) hit.emplace_back(r.time, q);
    std::sort(hit.begin(), hit.end());
    hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
    if (out) *out = hit;
    return static_cast<std::int64_t>(hit.size());
}

void grow(std::vector<std::int64_t>& v, Superframe sf) {
    if (static_cast<Superframe>(v.size()) <= sf) v.resize(static_cast<std::size_t>(sf) + 1, 0);
}

}  // namespace

void MetricsBuilder::on_fault(Superframe sf, const FaultKind& kind, const Topology& before) {
    if (const auto* c = std::get_if<CrashFault>(&kind)) {
        if (!crash_at_) crash_at_ = sf;
        crashed_.push_back(c->node);
        pre_crash_.push_back(std::make_shared<const Topology>(before));
        tracker_.forget(c->node);
    }
}

void MetricsBuilder::on_tdma(Superframe sf, const std::vector<TransmissionRecord>& records) {
    grow(tdma_, sf);
    std::vector<std::pair<Time, NodeId>> hits;
    tdma_[static_cast<std::size_t>(sf)] += count_collisions(records, &hits);
    if (crash_at_ && sf >= *crash_at_)
        for (const auto& [slot, r] : hits) tdma_collisions_.push_back({sf, static_cast<int>(slot), r});
}

void MetricsBuilder::on_overhead(Superframe sf, const std::vector<TransmissionRecord>& records) {
    grow(overhead_, sf);
    overhead_[static_cast<std::size_t>(sf)] += count_collisions(records);
}

void MetricsBuilder::on_snapshot(Superframe sf, const GlobalView&, const PredicateSnapshot& preds) {
    tracker_.record(sf, preds);
    superframes_ = std::max(superframes_, sf + 1);
}

MetricsReport MetricsBuilder::finish(const GlobalView& view, int tdma_slots) const {
    MetricsReport m;
    m.nodes = view.nodes.size();
    m.superframes_run = superframes_;
    for (auto p : tracker_.nodes())
        for (int l = 0; l < kLayers; ++l) m.local_times[p][static_cast<std::size_t>(l)] = tracker_.local_time(p, l);
    m.global_time = tracker_.global_time();
    m.fixed_points = fixed_points_;
    m.overhead_collisions = overhead_;
    m.tdma_collisions = tdma_;
    m.overhead_collisions.resize(static_cast<std::size_t>(superframes_), 0);
    m.tdma_collisions.resize(static_cast<std::size_t>(superframes_), 0);
    const auto window = std::min<Superframe>(kFinalWindow, superframes_);
    for (auto i = superframes_ - window; i < superframes_; ++i) m.tdma_collisions_final_window += m.tdma_collisions[static_cast<std::size_t>(i)];
    m.uniq_regressions = tracker_.uniq_regressions();

    std::set<Color> colors;
    std::map<NodeId, Name> names;
    for (const auto& [p, obs] : view.nodes) {
        BandwidthShare b;
        b.share = obs.shared.itvl.measure();
        if (auto base = true_base(p, view)) b.expected = Rational(1, *base);
        b.slots = static_cast<int>(discretize(obs.shared.itvl, tdma_slots).size());
        m.shares[p] = b;
        if (obs.shared.color) colors.insert(*obs.shared.color);
        names[p] = obs.shared.id;
    }
    m.colors_used = static_cast<int>(colors.size());
    if (view.nodes.size() <= 16) m.min_colors = brute_force_min_d2_coloring(*view.topology);
    m.longest_increasing_path = longest_increasing_path(*view.topology, names).length;
    m.namespace_size = namespace_size_;

    auto& f = m.final_checks;
    const auto preds = evaluate_predicates(view);
    f.uniq = std::all_of(preds.raw_uniq.begin(), preds.raw_uniq.end(), [](const auto& kv) { return kv.second; });
    f.mis = mis_legitimate(view);
    f.coloring_valid = coloring_valid(view);
    f.coloring_locally_minimal = f.coloring_valid && coloring_locally_minimal(view);
    f.slots_valid = slots_valid(view);
    if (view.nodes.size() <= 10) {
        std::set<NodeId> leaders;
        for (const auto& [p, obs] : view.nodes)
            if (obs.shared.leader) leaders.insert(p);
        const auto all = brute_force_mis(*view.topology);
        f.leaders_form_oracle_mis = std::find(all.begin(), all.end(), leaders) != all.end();
    }
    f.names_unique_n3 = true;
    for (const auto& [p, obs] : view.nodes)
        for (auto q : view.index->n3(p))
            if (q != p && view.vars(q).id == obs.shared.id) f.names_unique_n3 = false;

    if (crash_at_) {
        ContainmentResult c;
        c.crash_superframe = *crash_at_;
        c.crashed = crashed_;
        c.post_crash_collisions = static_cast<std::int64_t>(tdma_collisions_.size());
        std::set<NodeId> zone;
        for (std::size_t i = 0; i < crashed_.size(); ++i) {
            auto n3 = neighborhood(*pre_crash_[i], crashed_[i], 3);
            zone.insert(n3.begin(), n3.end());
        }
        for (const auto& col : tdma_collisions_)
            if (!zone.count(col.receiver)) ++c.uncontained_collisions;
        c.post_crash_superframes = superframes_ - *crash_at_;
        m.containment = c;
    }
    return m;
}

// --- replay -------------------------------------------------------------------

MetricsReport replay_trace(std::istream& in, std::optional<MetricsReport>* recorded) {
    std::string line;
    std::optional<MetricsBuilder> builder;
    std::shared_ptr<const Topology> topology;
    std::shared_ptr<const NeighborhoodIndex> index;
    std::optional<GlobalView> last;
    int tdma_slots = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = json::parse(line);
        const auto type = j.at("type").get<std::string>();
        if (type == "header") {
            const auto& cfg = j.at("config");
            tdma_slots = cfg.at("superframe").at("tdma_slots").get<int>();
            builder.emplace(cfg.at("guard_band").get<Superframe>(), j.at("namespace_size").get<Name>());
            topology = std::make_shared<const Topology>(topology_from_json(j.at("topology")));
            index = std::make_shared<const NeighborhoodIndex>(*topology);
            continue;
        }
        if (!builder) throw std::invalid_argument("trace does not start with a header");
        const auto sf = j.value("superframe", Superframe{0});
        if (type == "fault") {
            builder->on_fault(sf, fault_from_json(j.at("fault")).kind, *topology);
            topology = std::make_shared<const Topology>(topology_from_json(j.at("topology")));
            index = std::make_shared<const NeighborhoodIndex>(*topology);
        } else if (type == "tdma" || type == "overhead") {
            std::vector<TransmissionRecord> records;
            for (const auto& r : j.at("records")) records.push_back(record_from_json(r));
            if (type == "tdma")
                builder->on_tdma(sf, records);
            else
                builder->on_overhead(sf, records);
        } else if (type == "snapshot") {
            last = view_from_snapshot(j, topology, index);
            builder->on_snapshot(sf, *last, evaluate_predicates(*last));
        } else if (type == "fixed_point") {
            builder->on_fixed_point(sf);
        } else if (type == "metrics") {
            if (recorded) *recorded = metrics_from_json(j.at("metrics"));
        } else {
            throw std::invalid_argument("unknown trace event: " + type);
        }
    }
    if (!builder || !last) throw std::invalid_argument("trace has no header or no snapshot");
    return builder->finish(*last, tdma_slots);
}

}  // namespace tdma
