// Command-line front end: run, sweep, verify, oracle.

#include <glob.h>

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tdma/harness.hpp"

namespace {

using nlohmann::json;

json summary(const tdma::MetricsReport& m) {
    const auto full = tdma::to_json(m);
    json out;
    for (const char* key : {"nodes", "superframes_run", "global_time", "fixed_points", "tdma_collisions_final_window",
                            "colors_used", "min_colors", "longest_increasing_path", "namespace_size", "final_checks",
                            "containment", "passed"})
        out[key] = full.at(key);
    const auto med = m.median_local_time();
    out["median_local_time"] = med ? json(*med) : json(nullptr);
    return out;
}

std::vector<std::string> expand(const std::string& pattern) {
    glob_t g{};
    std::vector<std::string> out;
    if (::glob(pattern.c_str(), 0, nullptr, &g) == 0)
        for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    ::globfree(&g);
    return out;
}

int cmd_run(const std::string& config_path, const std::optional<std::uint64_t>& seed, bool clean,
            const std::optional<std::string>& trace, const std::optional<std::string>& metrics) {
    auto cfg = tdma::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (clean) cfg.clean_start = true;
    if (trace) cfg.trace_path = *trace;
    if (metrics) cfg.metrics_path = *metrics;
    const auto m = tdma::run(cfg);
    std::cout << summary(m).dump(2) << '\n';
    return m.passed() ? 0 : 1;
}

int cmd_sweep(const std::string& pattern, const std::string& out_path, unsigned threads) {
    std::vector<std::pair<std::string, tdma::ExperimentConfig>> configs;
    for (const auto& path : expand(pattern)) configs.emplace_back(path, tdma::load_config(path));
    if (configs.empty()) throw std::invalid_argument("no config matches " + pattern);
    const auto rows = tdma::sweep(configs, threads);
    std::ofstream csv(out_path);
    if (!csv) throw std::invalid_argument("cannot write " + out_path);
    tdma::write_sweep_csv(csv, rows);
    std::ofstream sum(out_path + ".summary.csv");
    tdma::write_sweep_summary(sum, rows);
    tdma::write_sweep_summary(std::cout, rows);
    bool ok = true;
    for (const auto& r : rows) ok = ok && r.metrics && r.metrics->passed();
    return ok ? 0 : 1;
}

int cmd_verify(const std::string& trace_path) {
    std::ifstream in(trace_path);
    if (!in) throw std::invalid_argument("cannot open trace " + trace_path);
    std::optional<tdma::MetricsReport> recorded;
    const auto replayed = tdma::replay_trace(in, &recorded);
    const bool reproduced = recorded && *recorded == replayed;
    json out = summary(replayed);
    out["reproduces_recorded_metrics"] = reproduced;
    std::cout << out.dump(2) << '\n';
    return reproduced && replayed.passed() ? 0 : 1;
}

int cmd_oracle(const std::string& topology_path) {
    const auto t = tdma::load_topology(topology_path);
    json out{{"nodes", t.size()}, {"edges", t.edges().size()}, {"delta", t.delta()}, {"max_degree", t.max_degree()}};
    try {
        json sets = json::array();
        for (const auto& s : tdma::brute_force_mis(t)) {
            json ids = json::array();
            for (auto p : s) ids.push_back(p.value);
            sets.push_back(ids);
        }
        out["maximal_independent_sets"] = sets;
    } catch (const tdma::OracleSizeError& e) {
        out["maximal_independent_sets"] = e.what();
    }
    try {
        out["min_distance_two_colors"] = tdma::brute_force_min_d2_coloring(t);
    } catch (const tdma::OracleSizeError& e) {
        out["min_distance_two_colors"] = e.what();
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"TDMA slot-assignment stack simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run one experiment config");
    std::string config_path;
    std::optional<std::uint64_t> seed;
    bool clean = false;
    std::optional<std::string> trace, metrics;
    run->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "override the config seed");
    run->add_flag("--clean-start", clean, "start every node from the all-clear state");
    run->add_option("--trace", trace, "write an NDJSON trace here");
    run->add_option("--metrics", metrics, "write the metrics report here");

    auto* sw = app.add_subcommand("sweep", "run many configs and seeds");
    std::string pattern, out_path;
    unsigned threads = 0;
    sw->add_option("--configs", pattern, "glob of config files")->required();
    sw->add_option("--out", out_path, "per-run CSV; a .summary.csv is written next to it")->required();
    sw->add_option("--threads", threads, "worker threads (0 = all cores)");

    auto* verify = app.add_subcommand("verify", "replay the validators over a trace");
    std::string trace_path;
    verify->add_option("--trace", trace_path, "trace written by run")->required()->check(CLI::ExistingFile);

    auto* oracle = app.add_subcommand("oracle", "brute-force reports for a small topology");
    std::string topology_path;
    oracle->add_option("--topology", topology_path, "topology file (JSON)")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(config_path, seed, clean, trace, metrics);
        if (*sw) return cmd_sweep(pattern, out_path, threads);
        if (*verify) return cmd_verify(trace_path);
        if (*oracle) return cmd_oracle(topology_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
