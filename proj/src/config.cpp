#include <filesystem>
#include <fstream>

#include "tdma/harness.hpp"

namespace tdma {

using nlohmann::json;

namespace {

std::string group_name(CorruptGroup g) {
    switch (g) {
        case CorruptGroup::shared: return "shared";
        case CorruptGroup::cache: return "cache";
        case CorruptGroup::timers: return "timers";
    }
    return "shared";
}

CorruptGroup group_from(const std::string& s) {
    if (s == "shared") return CorruptGroup::shared;
    if (s == "cache") return CorruptGroup::cache;
    if (s == "timers") return CorruptGroup::timers;
    throw std::invalid_argument("unknown corruption group: " + s);
}

std::vector<NodeId> ids_from(const json& j) {
    std::vector<NodeId> out;
    for (const auto& v : j) out.emplace_back(v.get<std::uint32_t>());
    return out;
}

json ids_json(const std::vector<NodeId>& ids) {
    json out = json::array();
    for (auto q : ids) out.push_back(q.value);
    return out;
}

}  // namespace

json to_json(const FaultEvent& f) {
    json j = std::visit(
        [](const auto& k) -> json {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, CrashFault>) {
                return {{"kind", "crash"}, {"node", k.node.value}};
            } else if constexpr (std::is_same_v<K, CorruptFault>) {
                json groups = json::array();
                for (auto g : k.groups) groups.push_back(group_name(g));
                return {{"kind", "corrupt"}, {"nodes", ids_json(k.nodes)}, {"groups", groups}};
            } else if constexpr (std::is_same_v<K, AddNodeFault>) {
                json out{{"kind", "add_node"}, {"id", k.id.value}, {"x", k.pos.x}, {"y", k.pos.y}};
                if (k.neighbors) out["neighbors"] = ids_json(*k.neighbors);
                return out;
            } else {
                return {{"kind", "move_node"}, {"node", k.node.value}, {"x", k.pos.x}, {"y", k.pos.y}};
            }
        },
        f.kind);
    if (f.at) j["superframe"] = *f.at;
    if (f.after_fixed_point) j["after_fixed_point"] = *f.after_fixed_point;
    return j;
}

FaultEvent fault_from_json(const json& j) {
    try {
        FaultEvent f;
        if (j.contains("superframe")) f.at = j["superframe"].get<Superframe>();
        if (j.contains("after_fixed_point")) f.after_fixed_point = j["after_fixed_point"].get<Superframe>();
        if (f.at.has_value() == f.after_fixed_point.has_value())
            throw std::invalid_argument("fault needs exactly one of superframe / after_fixed_point");
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "crash") {
            f.kind = CrashFault{NodeId{j.at("node").get<std::uint32_t>()}};
        } else if (kind == "corrupt") {
            CorruptFault c;
            if (j.contains("nodes")) c.nodes = ids_from(j["nodes"]);
            if (j.contains("groups")) {
                for (const auto& g : j["groups"]) c.groups.push_back(group_from(g.get<std::string>()));
            } else {
                c.groups = {CorruptGroup::shared, CorruptGroup::cache, CorruptGroup::timers};
            }
            f.kind = c;
        } else if (kind == "add_node") {
            AddNodeFault a{NodeId{j.at("id").get<std::uint32_t>()}, {j.value("x", 0.0), j.value("y", 0.0)}, {}};
            if (j.contains("neighbors")) a.neighbors = ids_from(j["neighbors"]);
            f.kind = a;
        } else if (kind == "move_node") {
            f.kind = MoveNodeFault{NodeId{j.at("node").get<std::uint32_t>()}, {j.at("x").get<double>(), j.at("y").get<double>()}};
        } else {
            throw std::invalid_argument("unknown fault kind: " + kind);
        }
        return f;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed fault: ") + e.what());
    }
}

void ExperimentConfig::validate() const {
    superframe.validate();
    if (superframes < 1) throw std::invalid_argument("superframes must be >= 1");
    if (!(naming_t > 3.0)) throw std::invalid_argument("naming.t must exceed 3");
    if (guard_band < 1) throw std::invalid_argument("guard_band must be >= 1");
    if (stop_after_stable && *stop_after_stable < 0) throw std::invalid_argument("stop_after_stable must be >= 0");
    if (post_fault_superframes < 0) throw std::invalid_argument("post_fault_superframes must be >= 0");
    for (const auto& f : faults) {
        if (f.at && (*f.at < 0 || *f.at >= superframes)) throw std::invalid_argument("fault time outside the run");
        if (f.after_fixed_point && *f.after_fixed_point < 0) throw std::invalid_argument("after_fixed_point must be >= 0");
    }
}

json to_json(const ExperimentConfig& c) {
    json faults = json::array();
    for (const auto& f : c.faults) faults.push_back(to_json(f));
    json j{
        {"topology", c.topology},
        {"superframe",
         {{"tdma_slots", c.superframe.tdma_slots},
          {"contention_minislots", c.superframe.contention_minislots},
          {"kappa", c.superframe.kappa},
          {"beta_max", c.superframe.beta_max},
          {"max_age", c.superframe.max_age}}},
        {"naming", {{"t", c.naming_t}}},
        {"superframes", c.superframes},
        {"seed", c.seed},
        {"clean_start", c.clean_start},
        {"stop_after_stable", c.stop_after_stable ? json(*c.stop_after_stable) : json(nullptr)},
        {"post_fault_superframes", c.post_fault_superframes},
        {"guard_band", c.guard_band},
        {"faults", faults},
        {"frame_codec", codec_name(c.codec)},
    };
    if (!c.seeds.empty()) j["seeds"] = c.seeds;
    return j;
}

ExperimentConfig config_from_json(const json& j, const std::string& base_dir) {
    try {
        ExperimentConfig c;
        c.base_dir = base_dir;
        if (j.contains("topology")) c.topology = j["topology"];
        if (j.contains("superframe")) {
            const auto& s = j["superframe"];
            c.superframe.tdma_slots = s.value("tdma_slots", c.superframe.tdma_slots);
            c.superframe.contention_minislots = s.value("contention_minislots", c.superframe.contention_minislots);
            c.superframe.kappa = s.value("kappa", c.superframe.kappa);
            c.superframe.beta_max = s.value("beta_max", c.superframe.beta_max);
            c.superframe.max_age = s.value("max_age", c.superframe.max_age);
        }
        if (j.contains("naming")) c.naming_t = j["naming"].value("t", c.naming_t);
        c.superframes = j.value("superframes", c.superframes);
        c.seed = j.value("seed", c.seed);
        if (j.contains("seeds")) {
            const auto& s = j["seeds"];
            if (s.is_object()) {
                for (auto v = s.at("from").get<std::uint64_t>(); v <= s.at("to").get<std::uint64_t>(); ++v)
                    c.seeds.push_back(v);
            } else {
                c.seeds = s.get<std::vector<std::uint64_t>>();
            }
        }
        c.clean_start = j.value("clean_start", c.clean_start);
        if (j.contains("stop_after_stable")) {
            if (j["stop_after_stable"].is_null())
                c.stop_after_stable.reset();
            else
                c.stop_after_stable = j["stop_after_stable"].get<Superframe>();
        }
        c.post_fault_superframes = j.value("post_fault_superframes", c.post_fault_superframes);
        c.guard_band = j.value("guard_band", c.guard_band);
        if (j.contains("faults"))
            for (const auto& f : j["faults"]) c.faults.push_back(fault_from_json(f));
        if (j.contains("frame_codec")) c.codec = parse_codec(j["frame_codec"].get<std::string>());
        if (j.contains("trace")) c.trace_path = j["trace"].get<std::string>();
        if (j.contains("metrics")) c.metrics_path = j["metrics"].get<std::string>();
        c.validate();
        return c;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config " + path + " is not valid JSON: " + e.what());
    }
    return config_from_json(j, std::filesystem::path(path).parent_path().string());
}

Topology path_topology(int n, int delta) {
    if (n < 1) throw TopologyError("path needs at least one node");
    std::map<NodeId, std::optional<Position>> nodes;
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 0; i < n; ++i) {
        nodes[NodeId(static_cast<std::uint32_t>(i))] = std::nullopt;
        if (i > 0) edges.emplace_back(NodeId(static_cast<std::uint32_t>(i - 1)), NodeId(static_cast<std::uint32_t>(i)));
    }
    return Topology(delta, std::move(nodes), edges);
}

Topology build_topology(const json& spec, const std::string& base_dir, std::uint64_t run_seed) {
    try {
        if (spec.contains("file")) {
            std::filesystem::path p = spec["file"].get<std::string>();
            if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
            return load_topology(p.string());
        }
        if (spec.contains("geometric")) {
            const auto& g = spec["geometric"];
            GeometricSpec gs;
            gs.n = g.at("n").get<int>();
            gs.radius = g.at("radius").get<double>();
            gs.delta = g.value("delta", gs.delta);
            gs.seed = g.contains("seed") ? g["seed"].get<std::uint64_t>() : run_seed;
            return generate_geometric(gs);
        }
        if (spec.contains("fixture")) {
            const auto name = spec["fixture"].get<std::string>();
            if (name != "fig1") throw TopologyError("unknown fixture: " + name);
            return fig1_topology();
        }
        if (spec.contains("path")) {
            const auto& p = spec["path"];
            return path_topology(p.at("n").get<int>(), p.value("delta", 8));
        }
        if (spec.contains("inline")) return topology_from_json(spec["inline"]);
    } catch (const json::exception& e) {
        throw TopologyError(std::string("malformed topology spec: ") + e.what());
    }
    throw TopologyError("topology spec needs one of file, geometric, fixture, path, inline");
}

}  // namespace tdma
