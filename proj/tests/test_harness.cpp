#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "tdma/coloring.hpp"
#include "tdma/harness.hpp"
#include "tdma/mis.hpp"
#include "tdma/naming.hpp"
#include "tdma/slots.hpp"
#include "test_util.hpp"

using namespace tdma;
using tdma::test::id;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir() {
    auto d = fs::temp_directory_path() / ("tdma_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

ExperimentConfig fig1_config(std::uint64_t seed = 1) {
    ExperimentConfig c;
    c.seed = seed;
    return c;
}

}  // namespace

TEST(Harness, SingleNodeConvergesImmediately) {
    ExperimentConfig c;
    c.topology = {{"path", {{"n", 1}}}};
    Simulation sim(c);
    auto m = sim.run();
    EXPECT_TRUE(m.passed());
    const auto view = sim.view();
    const auto& v = view.vars(id(0));
    EXPECT_TRUE(v.leader);
    EXPECT_EQ(v.color, 0);
    EXPECT_EQ(v.itvl, IntervalSet::full());
    EXPECT_EQ(discretize(v.itvl, c.superframe.tdma_slots).size(), static_cast<std::size_t>(c.superframe.tdma_slots));
}

TEST(Harness, FigureNetworkEndToEnd) {
    Simulation sim(fig1_config());
    auto m = sim.run();
    ASSERT_TRUE(sim.fixed_point().has_value());
    EXPECT_TRUE(m.passed());
    EXPECT_EQ(m.tdma_collisions_final_window, 0);
    EXPECT_EQ(m.colors_used, 9);
    EXPECT_EQ(m.min_colors, 9);
    auto view = sim.view();
    EXPECT_TRUE(coloring_valid(view));
    EXPECT_TRUE(slots_valid(view));
    EXPECT_TRUE(mis_legitimate(view));
    for (auto [p, u] : uniq_all(view)) EXPECT_TRUE(u) << p;
    EXPECT_LE(m.longest_increasing_path, static_cast<int>(m.namespace_size));
    // star nodes all see nine colours
    for (char c : std::string("ABCDEVWXY")) EXPECT_EQ(view.vars(fig1_node(c)).base, 9);
    // Spectra carry two-hop facts, so restricted to the leader's true N2 the
    // used set is exactly the colours assigned there by smaller leaders; each
    // dominated member's forbidden set matches its own N2 the same way.
    auto truth_for = [&](NodeId x, const Rank& leader) {
        std::set<Color> truth;
        for (auto q : view.index->n2(x)) {
            const auto& v = view.vars(q);
            if (q != x && v.min_leader && *v.min_leader < leader) truth.insert(*v.color);
        }
        return truth;
    };
    for (const auto& [p, obs] : view.nodes) {
        if (!obs.shared.leader) continue;
        const Rank me = obs.shared.rank();
        std::vector<std::vector<SpectrumEntry>> restricted;
        for (auto q : view.topology->neighbors(p)) {
            auto& r = restricted.emplace_back();
            for (const auto& e : view.vars(q).spectrum)
                if (e.node != p && view.index->within(p, e.node, 2)) r.push_back(e);
        }
        std::vector<const std::vector<SpectrumEntry>*> spectra;
        for (const auto& r : restricted) spectra.push_back(&r);
        EXPECT_EQ(used_colors(me, spectra), truth_for(p, me)) << p;
        for (auto q : view.topology->neighbors(p)) {
            const auto& v = view.vars(q);
            if (v.min_leader && v.min_leader->node == p)
                EXPECT_EQ(forbidden_from_spectrum(q, v.spectrum, me), truth_for(q, me)) << q;
        }
    }
}

TEST(Harness, DeterministicTraces) {
    auto dir = temp_dir();
    std::vector<std::string> traces;
    for (auto codec : {FrameCodec::binary, FrameCodec::binary, FrameCodec::none}) {
        auto c = fig1_config(5);
        c.codec = codec;
        c.trace_path = (dir / ("trace" + std::to_string(traces.size()) + ".jsonl")).string();
        run(c);
        traces.push_back(slurp(*c.trace_path));
    }
    EXPECT_FALSE(traces[0].empty());
    EXPECT_EQ(traces[0], traces[1]);
    // the codec changes nothing past the header line
    auto body = [](const std::string& t) { return t.substr(t.find('\n')); };
    EXPECT_EQ(body(traces[0]), body(traces[2]));
    auto other = fig1_config(6);
    other.trace_path = (dir / "trace_other.jsonl").string();
    run(other);
    EXPECT_NE(slurp(*other.trace_path), traces[0]);
    fs::remove_all(dir);
}

TEST(Harness, ReplayReproducesMetrics) {
    auto c = fig1_config(3);
    c.faults.push_back(FaultEvent{std::nullopt, 20, CorruptFault{{fig1_node('C')}, {}}});
    c.post_fault_superframes = 50;
    std::stringstream trace;
    Simulation sim(c);
    sim.set_trace(&trace);
    auto live = sim.run();
    std::optional<MetricsReport> recorded;
    auto replayed = replay_trace(trace, &recorded);
    ASSERT_TRUE(recorded.has_value());
    EXPECT_EQ(replayed, live);
    EXPECT_EQ(*recorded, live);
    EXPECT_EQ(metrics_from_json(to_json(live)), live);
}

TEST(Harness, ConfigErrors) {
    EXPECT_THROW(config_from_json(nlohmann::json{{"superframes", 0}}), std::invalid_argument);
    EXPECT_THROW(config_from_json(nlohmann::json{{"naming", {{"t", 2.0}}}}), std::invalid_argument);
    EXPECT_THROW(config_from_json(nlohmann::json{{"superframe", {{"contention_minislots", 0}}}}), std::invalid_argument);
    EXPECT_THROW(config_from_json(nlohmann::json{{"frame_codec", "xml"}}), std::invalid_argument);
    EXPECT_THROW(config_from_json(nlohmann::json{{"seed", "one"}}), std::invalid_argument);
    EXPECT_THROW(load_config("/nonexistent/config.json"), std::invalid_argument);
    EXPECT_THROW(build_topology(nlohmann::json{{"fixture", "fig9"}}, ".", 1), TopologyError);
    EXPECT_THROW(build_topology(nlohmann::json::object(), ".", 1), TopologyError);
    auto round = config_from_json(to_json(fig1_config(9)));
    EXPECT_EQ(to_json(round), to_json(fig1_config(9)));
}

TEST(Harness, CrashOnPathRestabilizes) {
    // A crash re-runs colouring and slot allocation around it. Transient
    // collisions may reach past N3 (the reallocation cascades along the
    // path), so this checks the bookkeeping and the recovery rather than
    // containment itself.
    for (std::uint64_t seed : {1, 2, 3}) {
        ExperimentConfig c;
        c.topology = {{"path", {{"n", 12}}}};
        c.seed = seed;
        c.faults.push_back(FaultEvent{std::nullopt, 10, CrashFault{id(0)}});
        c.post_fault_superframes = 500;
        std::stringstream trace;
        Simulation sim(c);
        sim.set_trace(&trace);
        auto m = sim.run();
        ASSERT_TRUE(m.containment.has_value());
        EXPECT_GE(m.containment->post_crash_superframes, 500);
        EXPECT_EQ(m.containment->crashed, std::vector<NodeId>{id(0)});
        EXPECT_EQ(m.nodes, 11u);
        EXPECT_EQ(m.tdma_collisions_final_window, 0);
        EXPECT_TRUE(m.final_checks.coloring_valid && m.final_checks.mis && m.final_checks.uniq);

        // recount from the trace: distinct (superframe, slot, receiver)
        // collisions after the crash, split by path distance from node 0
        std::set<std::tuple<Superframe, int, std::uint32_t>> all, outside;
        std::optional<Superframe> crash;
        std::string line;
        while (std::getline(trace, line)) {
            auto j = nlohmann::json::parse(line);
            if (j["type"] == "fault") crash = j["superframe"].get<Superframe>();
            if (j["type"] != "tdma" || !crash || j["superframe"].get<Superframe>() < *crash) continue;
            for (const auto& r : j["records"])
                for (const auto& x : r["x"]) {
                    auto key = std::make_tuple(j["superframe"].get<Superframe>(), r["t"].get<int>(), x.get<std::uint32_t>());
                    all.insert(key);
                    if (x.get<std::uint32_t>() > 3) outside.insert(key);
                }
        }
        EXPECT_EQ(m.containment->post_crash_collisions, static_cast<std::int64_t>(all.size()));
        EXPECT_EQ(m.containment->uncontained_collisions, static_cast<std::int64_t>(outside.size()));
    }
}

TEST(Harness, Sweep) {
    auto base = fig1_config();
    std::vector<std::pair<std::string, ExperimentConfig>> configs;
    for (std::uint64_t s = 1; s <= 20; ++s) {
        auto c = base;
        c.seed = s;
        configs.emplace_back("fig1", c);
    }
    auto rows = sweep(configs, 1);
    ASSERT_EQ(rows.size(), 20u);
    int clean = 0;
    for (const auto& r : rows) {
        ASSERT_TRUE(r.metrics.has_value()) << r.error;
        const auto& m = *r.metrics;
        const auto& f = m.final_checks;
        EXPECT_FALSE(m.fixed_points.empty()) << "seed " << r.seed;
        EXPECT_TRUE(f.uniq && f.mis && f.coloring_valid && f.coloring_locally_minimal && f.names_unique_n3)
            << "seed " << r.seed;
        EXPECT_EQ(m.tdma_collisions_final_window, 0) << "seed " << r.seed;
        EXPECT_TRUE(m.uniq_regressions.empty()) << "seed " << r.seed;
        // Known shortfall: a node can be squeezed below 1/base by two-hop
        // peers that do not conflict with each other. Nobody ever gets more.
        bool short_share = false;
        for (const auto& [p, s] : m.shares) {
            ASSERT_TRUE(s.expected.has_value());
            EXPECT_LE(s.share, *s.expected) << "seed " << r.seed << " node " << p;
            short_share = short_share || s.share < *s.expected;
        }
        EXPECT_EQ(f.slots_valid, !short_share) << "seed " << r.seed;
        clean += m.passed();
    }
    EXPECT_GT(clean, 0);
    std::stringstream csv, summary;
    write_sweep_csv(csv, rows);
    write_sweep_summary(summary, rows);
    const auto text = csv.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 21);
    EXPECT_FALSE(summary.str().empty());
    EXPECT_THROW(sweep({}), std::invalid_argument);
}
