#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "tdma/harness.hpp"

namespace tdma {

std::vector<SweepRow> sweep(const std::vector<std::pair<std::string, ExperimentConfig>>& configs, unsigned threads) {
    if (configs.empty()) throw std::invalid_argument("sweep needs at least one config");
    struct Task {
        std::string name;
        ExperimentConfig config;
    };
    std::vector<Task> tasks;
    for (const auto& [name, cfg] : configs) {
        auto seeds = cfg.seeds.empty() ? std::vector<std::uint64_t>{cfg.seed} : cfg.seeds;
        for (auto s : seeds) {
            ExperimentConfig c = cfg;
            c.seed = s;
            c.seeds.clear();
            c.trace_path.reset();
            c.metrics_path.reset();
            tasks.push_back({name, std::move(c)});
        }
    }

    std::vector<SweepRow> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (auto i = next++; i < tasks.size(); i = next++) {
            auto& row = rows[i];
            row.config = tasks[i].name;
            row.seed = tasks[i].config.seed;
            try {
                Simulation sim(tasks[i].config);
                row.nodes = sim.topology().size();
                row.metrics = sim.run();
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

template <typename T>
std::string or_empty(const std::optional<T>& v) {
    if (!v) return "";
    std::ostringstream os;
    os << *v;
    return os.str();
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    if (lo == hi || std::isinf(v[hi])) return lo == hi ? v[lo] : v[hi];
    return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "config,seed,nodes,superframes_run,fixed_point,global_time,median_local_time,"
           "tdma_collisions_final_window,uniq_regressions,colors_used,min_colors,longest_increasing_path,"
           "namespace_size,passed,error\n";
    for (const auto& r : rows) {
        out << csv_escape(r.config) << ',' << r.seed << ',' << r.nodes << ',';
        if (r.metrics) {
            const auto& m = *r.metrics;
            int regressions = 0;
            for (const auto& [_, k] : m.uniq_regressions) regressions += k;
            out << m.superframes_run << ','
                << (m.fixed_points.empty() ? std::string() : std::to_string(m.fixed_points.front())) << ','
                << or_empty(m.global_time) << ',' << or_empty(m.median_local_time()) << ','
                << m.tdma_collisions_final_window << ',' << regressions << ',' << m.colors_used << ','
                << or_empty(m.min_colors) << ',' << m.longest_increasing_path << ',' << m.namespace_size << ','
                << (m.passed() ? "true" : "false") << ',';
        } else {
            out << ",,,,,,,,,,,false,";
        }
        out << csv_escape(r.error) << '\n';
    }
}

void write_sweep_summary(std::ostream& out, const std::vector<SweepRow>& rows) {
    // Pooled per-node local times by network size; nodes that never settle
    // count as +inf so they can only push quantiles up.
    struct Group {
        std::size_t runs = 0;
        std::size_t failed = 0;
        std::size_t unconverged = 0;
        std::vector<double> local;
        std::vector<double> global;
    };
    std::map<std::size_t, Group> by_n;
    for (const auto& r : rows) {
        auto& g = by_n[r.nodes];
        ++g.runs;
        if (!r.metrics) {
            ++g.failed;
            continue;
        }
        for (const auto& [p, t] : r.metrics->local_times) {
            if (t[kLayers - 1]) {
                g.local.push_back(static_cast<double>(*t[kLayers - 1]));
            } else {
                ++g.unconverged;
                g.local.push_back(std::numeric_limits<double>::infinity());
            }
        }
        g.global.push_back(r.metrics->global_time ? static_cast<double>(*r.metrics->global_time)
                                                  : std::numeric_limits<double>::infinity());
    }
    out << "nodes,runs,failed_runs,unconverged_nodes,local_p25,local_median,local_p75,local_p90,global_median\n";
    for (const auto& [n, g] : by_n) {
        out << n << ',' << g.runs << ',' << g.failed << ',' << g.unconverged << ',' << quantile(g.local, 0.25) << ','
            << quantile(g.local, 0.5) << ',' << quantile(g.local, 0.75) << ',' << quantile(g.local, 0.9) << ','
            << quantile(g.global, 0.5) << '\n';
    }
}

}  // namespace tdma
