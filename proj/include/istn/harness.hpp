#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "istn/alternating.hpp"
#include "istn/greedy.hpp"
#include "istn/instance.hpp"

namespace istn {

// What a sweep varies. Convergence and Compare run the base scenario as-is;
// Demand varies the per-user rate demand (bit/s); Bandwidth and Connections
// vary the center satellite's bandwidth budget (Hz), reporting power and
// per-satellite connection counts respectively (both emit both tables).
enum class ExperimentKind { Convergence, Demand, Bandwidth, Connections, Compare };

const char* to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);  // throws

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Convergence;
    ScenarioConfig scenario;
    AlgorithmConfig algorithm;
    GreedyOptions greedy;
    // Sweep values in base SI units (bit/s for Demand, Hz for Bandwidth and
    // Connections); empty selects the kind's default grid.
    std::vector<double> sweep;
    std::vector<std::uint64_t> seeds;  // empty selects 1..30
    std::string out_dir = "results";

    ExperimentSpec with_defaults() const;  // fills empty sweep/seeds
    void validate() const;                 // throws std::invalid_argument
};

// Runs every (sweep value, seed) cell with both methods and writes under
// out_dir: manifest.json, summary.csv, aggregate.csv, connections.csv, and
// convergence.csv (Convergence kind only). A failing cell becomes a
// status=Error row; the sweep never aborts. Cells run sequentially in sweep
// then seed order so identical specs produce byte-identical files. Returns
// the resolved spec that was run.
ExperimentSpec run_experiment(const ExperimentSpec& spec);

// The manifest captures the resolved spec; loading it and re-running
// reproduces every output file byte-for-byte.
void save_manifest(const ExperimentSpec& spec, const std::string& path);
ExperimentSpec load_manifest(const std::string& path);

}  // namespace istn
