#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "tdma/codec.hpp"
#include "tdma/runtime.hpp"
#include "tdma/validators.hpp"

namespace tdma {

struct CrashFault {
    NodeId node;
};
struct CorruptFault {
    std::vector<NodeId> nodes;  // empty: every node
    std::vector<CorruptGroup> groups;
};
struct AddNodeFault {
    NodeId id;
    Position pos;
    std::optional<std::vector<NodeId>> neighbors;
};
struct MoveNodeFault {
    NodeId node;
    Position pos;
};
using FaultKind = std::variant<CrashFault, CorruptFault, AddNodeFault, MoveNodeFault>;

/// A scheduled fault. Fires at an absolute superframe, or a number of
/// superframes after the first fixed point reached since the previous fault.
struct FaultEvent {
    std::optional<Superframe> at;
    std::optional<Superframe> after_fixed_point;
    FaultKind kind;
};

nlohmann::json to_json(const FaultEvent& f);
FaultEvent fault_from_json(const nlohmann::json& j);

struct ExperimentConfig {
    /// {"file": path} | {"geometric": {n, radius, delta[, seed]}} |
    /// {"fixture": "fig1"} | {"path": {n[, delta]}} | {"inline": topology}
    nlohmann::json topology = {{"fixture", "fig1"}};
    std::string base_dir = ".";
    SuperframeConfig superframe;
    double naming_t = 6.0;
    Superframe superframes = 2000;
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> seeds;  // sweep only
    bool clean_start = false;
    /// Stop this many superframes after a fixed point; unset runs the full
    /// budget.
    std::optional<Superframe> stop_after_stable = 100;
    Superframe post_fault_superframes = 0;
    Superframe guard_band = 50;
    std::vector<FaultEvent> faults;
    FrameCodec codec = FrameCodec::none;
    std::optional<std::string> trace_path;
    std::optional<std::string> metrics_path;

    /// Throws std::invalid_argument with a diagnostic.
    void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& c);
/// Relative topology paths resolve against `base_dir`.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

/// Builds the topology described by a config; geometric specs without a
/// seed use `run_seed`.
Topology build_topology(const nlohmann::json& spec, const std::string& base_dir, std::uint64_t run_seed);

/// A path 0-1-...-(n-1) without geometry.
Topology path_topology(int n, int delta = 8);

struct BandwidthShare {
    Rational share;
    std::optional<Rational> expected;  // 1 / true base
    int slots = 0;

    friend bool operator==(const BandwidthShare&, const BandwidthShare&) = default;
};

struct ContainmentResult {
    Superframe crash_superframe = 0;
    std::vector<NodeId> crashed;
    std::int64_t post_crash_collisions = 0;
    std::int64_t uncontained_collisions = 0;
    Superframe post_crash_superframes = 0;

    friend bool operator==(const ContainmentResult&, const ContainmentResult&) = default;
};

struct FinalChecks {
    bool uniq = false;
    bool mis = false;
    bool coloring_valid = false;
    bool coloring_locally_minimal = false;
    bool slots_valid = false;
    std::optional<bool> leaders_form_oracle_mis;  // small graphs only
    bool names_unique_n3 = false;

    bool all() const;
    friend bool operator==(const FinalChecks&, const FinalChecks&) = default;
};

/// Everything a run reports. Computable from the trace alone, so replaying
/// the validators over a trace must reproduce it exactly.
struct MetricsReport {
    std::size_t nodes = 0;
    Superframe superframes_run = 0;
    std::map<NodeId, std::array<std::optional<Superframe>, kLayers>> local_times;
    std::optional<Superframe> global_time;
    std::vector<Superframe> fixed_points;
    std::vector<std::int64_t> overhead_collisions;  // per superframe, colliding (mini-slot, receiver) pairs
    std::vector<std::int64_t> tdma_collisions;      // per superframe, colliding (slot, receiver) pairs
    std::int64_t tdma_collisions_final_window = 0;  // last 100 superframes
    std::map<NodeId, int> uniq_regressions;
    std::map<NodeId, BandwidthShare> shares;
    int colors_used = 0;
    std::optional<int> min_colors;
    int longest_increasing_path = 0;
    Name namespace_size = 0;
    FinalChecks final_checks;
    std::optional<ContainmentResult> containment;

    /// Median over nodes of the overall local time; unset if any node has
    /// not converged.
    std::optional<double> median_local_time() const;
    bool passed() const;
    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

nlohmann::json to_json(const MetricsReport& m);
MetricsReport metrics_from_json(const nlohmann::json& j);

inline constexpr Superframe kFinalWindow = 100;

// Trace line helpers.
nlohmann::json to_json(const TransmissionRecord& r);
TransmissionRecord record_from_json(const nlohmann::json& j);
nlohmann::json snapshot_json(Superframe sf, const GlobalView& view);
GlobalView view_from_snapshot(const nlohmann::json& j, std::shared_ptr<const Topology> topology,
                              std::shared_ptr<const NeighborhoodIndex> index);

/// Accumulates the trace-derivable parts of a MetricsReport. Used both by
/// the live simulation and by trace replay.
class MetricsBuilder {
public:
    MetricsBuilder(Superframe guard_band, Name namespace_size) : tracker_(guard_band), namespace_size_(namespace_size) {}

    void on_fault(Superframe sf, const FaultKind& kind, const Topology& before);
    void on_tdma(Superframe sf, const std::vector<TransmissionRecord>& records);
    void on_overhead(Superframe sf, const std::vector<TransmissionRecord>& records);
    void on_snapshot(Superframe sf, const GlobalView& view, const PredicateSnapshot& preds);
    void on_fixed_point(Superframe sf) { fixed_points_.push_back(sf); }
    MetricsReport finish(const GlobalView& final_view, int tdma_slots) const;

    const ConvergenceTracker& tracker() const { return tracker_; }

private:
    ConvergenceTracker tracker_;
    Name namespace_size_;
    Superframe superframes_ = 0;
    std::vector<Superframe> fixed_points_;
    std::vector<std::int64_t> overhead_;
    std::vector<std::int64_t> tdma_;
    std::vector<TdmaCollision> tdma_collisions_;
    std::optional<Superframe> crash_at_;
    std::vector<NodeId> crashed_;
    std::vector<std::shared_ptr<const Topology>> pre_crash_;
};

/// One simulated network. Superframe order: faults, TDMA part under full
/// load, overhead mini-slots, observation.
class Simulation {
public:
    explicit Simulation(ExperimentConfig config);
    ~Simulation();

    /// Sends every event to `out` as newline-delimited JSON.
    void set_trace(std::ostream* out);

    void advance();
    bool finished() const;
    /// Runs to completion and returns the metrics.
    MetricsReport run();

    Superframe superframe() const { return next_sf_; }
    const ExperimentConfig& config() const { return config_; }
    const RuntimeParams& params() const { return params_; }
    const Topology& topology() const { return *topology_; }
    const std::map<NodeId, NodeState>& states() const { return states_; }
    NodeState& state(NodeId p) { return states_.at(p); }
    GlobalView view() const;
    const std::optional<Superframe>& fixed_point() const { return fixed_point_; }
    const MetricsBuilder& builder() const { return builder_; }

    /// No guard would change anything and every cache mirrors the true
    /// three-hop neighbourhood. Says nothing about legitimacy.
    bool at_fixed_point() const;
    MetricsReport metrics() const;

private:
    void apply_fault(std::size_t index);
    void write(const nlohmann::json& line);
    Time observe_time() const;
    std::vector<NodeId> universe() const;

    ExperimentConfig config_;
    RuntimeParams params_;
    std::shared_ptr<const Topology> topology_;
    std::shared_ptr<const NeighborhoodIndex> index_;
    std::map<NodeId, NodeState> states_;
    std::map<NodeId, Rng> rngs_;
    std::vector<bool> fired_;
    Superframe next_sf_ = 0;
    std::optional<Superframe> fixed_point_;  // since the last fault
    std::optional<Superframe> last_fault_;
    MetricsBuilder builder_;
    std::ostream* trace_ = nullptr;
    NodeId max_id_;
};

/// Runs one config, writing the trace and metrics files it names.
MetricsReport run(const ExperimentConfig& config);

/// Recomputes a MetricsReport from a trace. `recorded` receives the report
/// stored in the trace, if any.
MetricsReport replay_trace(std::istream& in, std::optional<MetricsReport>* recorded = nullptr);

struct SweepRow {
    std::string config;
    std::uint64_t seed = 0;
    std::size_t nodes = 0;
    std::optional<MetricsReport> metrics;
    std::string error;
};

/// Runs every (config, seed) pair on `threads` workers. Individual failures
/// are recorded in the row and do not stop the sweep. Throws
/// std::invalid_argument when given no configs.
std::vector<SweepRow> sweep(const std::vector<std::pair<std::string, ExperimentConfig>>& configs, unsigned threads = 0);

/// Per-run CSV rows.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
/// Median and quantiles of per-node local convergence time, grouped by n.
void write_sweep_summary(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace tdma
