#include "istn/harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

#include "istn/detail/json_io.hpp"
#include "istn/units.hpp"

namespace istn {

namespace {

namespace fs = std::filesystem;
using detail::json;
using detail::require_field;

// %.17g survives a text round trip exactly, so re-runs diff clean.
std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> default_sweep(ExperimentKind kind,
                                  const ScenarioConfig& scenario) {
    switch (kind) {
        case ExperimentKind::Demand: {
            std::vector<double> v;
            for (double r = 60e6; r <= 120e6 + 1.0; r += 10e6) v.push_back(r);
            return v;
        }
        case ExperimentKind::Bandwidth:
        case ExperimentKind::Connections: {
            std::vector<double> v;
            for (double w = 100e6; w <= 700e6 + 1.0; w += 100e6) {
                v.push_back(w);
            }
            return v;
        }
        case ExperimentKind::Convergence:
        case ExperimentKind::Compare:
            return {scenario.demand_per_user_bps};
    }
    return {scenario.demand_per_user_bps};
}

ScenarioConfig cell_config(const ExperimentSpec& spec, double sweep_value,
                           std::uint64_t seed) {
    ScenarioConfig cfg = spec.scenario;
    cfg.rng_seed = seed;
    switch (spec.kind) {
        case ExperimentKind::Demand:
            cfg.demand_per_user_bps = sweep_value;
            break;
        case ExperimentKind::Bandwidth:
        case ExperimentKind::Connections: {
            std::vector<double> budgets(
                static_cast<std::size_t>(cfg.num_satellites),
                cfg.bandwidth_leo_hz);
            if (!cfg.bandwidth_leo_override_hz.empty()) {
                budgets = cfg.bandwidth_leo_override_hz;
            }
            budgets[static_cast<std::size_t>((cfg.num_satellites - 1) / 2)] =
                sweep_value;
            cfg.bandwidth_leo_override_hz = std::move(budgets);
            break;
        }
        case ExperimentKind::Convergence:
        case ExperimentKind::Compare:
            break;
    }
    return cfg;
}

struct CellOutcome {
    std::string status = "Error";
    int iterations = 0;
    double power_w = std::numeric_limits<double>::quiet_NaN();
    double satisfaction = std::numeric_limits<double>::quiet_NaN();
    bool feasible = false;
    std::vector<int> connections;
    std::vector<double> bandwidth_used;
    std::vector<double> trace;
};

CellOutcome run_alg1_cell(const ProblemInstance& inst,
                          const AlgorithmConfig& config) {
    CellOutcome out;
    const Solution sol = run_algorithm1(inst, config);
    out.status = to_string(sol.status);
    out.iterations = sol.iterations;
    out.trace = sol.objective_trace;
    if (sol.status != AlgorithmStatus::Infeasible) {
        const SolutionMetrics metrics =
            evaluate_solution(inst, sol.association, sol.allocation);
        out.power_w = metrics.total_power_w;
        out.satisfaction = metrics.satisfaction;
        out.feasible = metrics.satisfaction == 1.0;
        out.connections = metrics.connections;
        out.bandwidth_used = metrics.bandwidth_used;
    }
    return out;
}

CellOutcome run_greedy_cell(const ProblemInstance& inst,
                            const GreedyOptions& options) {
    CellOutcome out;
    const GreedyResult result = run_greedy(inst, options);
    out.status = result.feasible ? "Feasible" : "Infeasible";
    out.power_w = result.total_power_w;
    out.satisfaction = result.satisfaction;
    out.feasible = result.feasible;
    const SolutionMetrics metrics =
        evaluate_solution(inst, result.association, result.allocation);
    out.connections = metrics.connections;
    out.bandwidth_used = metrics.bandwidth_used;
    return out;
}

struct Aggregate {
    int num_seeds = 0;
    int num_feasible = 0;
    double power_sum_feasible = 0.0;
    double satisfaction_sum = 0.0;
};

json options_to_json(const AlgorithmConfig& a) {
    json j;
    j["rho"] = a.rho;
    j["eps"] = a.eps;
    j["max_iters"] = a.max_iters;
    j["solver"] = {{"tolerance", a.solver.tolerance},
                   {"newton_tolerance", a.solver.newton_tolerance},
                   {"max_newton_iters", a.solver.max_newton_iters},
                   {"min_bandwidth_hz", a.solver.min_bandwidth_hz},
                   {"weight_floor", a.solver.weight_floor}};
    j["association"] = {
        {"tolerance", a.association.tolerance},
        {"node_limit", a.association.node_limit},
        {"lexicographic_tiebreak", a.association.lexicographic_tiebreak}};
    return j;
}

AlgorithmConfig options_from_json(const json& j) {
    constexpr const char* kWhat = "manifest algorithm";
    AlgorithmConfig a;
    a.rho = require_field(j, "rho", kWhat).get<double>();
    a.eps = require_field(j, "eps", kWhat).get<double>();
    a.max_iters = require_field(j, "max_iters", kWhat).get<int>();
    const json& s = require_field(j, "solver", kWhat);
    a.solver.tolerance = require_field(s, "tolerance", kWhat).get<double>();
    a.solver.newton_tolerance =
        require_field(s, "newton_tolerance", kWhat).get<double>();
    a.solver.max_newton_iters =
        require_field(s, "max_newton_iters", kWhat).get<int>();
    a.solver.min_bandwidth_hz =
        require_field(s, "min_bandwidth_hz", kWhat).get<double>();
    a.solver.weight_floor =
        require_field(s, "weight_floor", kWhat).get<double>();
    const json& asc = require_field(j, "association", kWhat);
    a.association.tolerance =
        require_field(asc, "tolerance", kWhat).get<double>();
    a.association.node_limit =
        require_field(asc, "node_limit", kWhat).get<long long>();
    a.association.lexicographic_tiebreak =
        require_field(asc, "lexicographic_tiebreak", kWhat).get<bool>();
    return a;
}

}  // namespace

const char* to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Convergence: return "convergence";
        case ExperimentKind::Demand: return "demand";
        case ExperimentKind::Bandwidth: return "bandwidth";
        case ExperimentKind::Connections: return "connections";
        case ExperimentKind::Compare: return "compare";
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
    if (name == "convergence") return ExperimentKind::Convergence;
    if (name == "demand") return ExperimentKind::Demand;
    if (name == "bandwidth") return ExperimentKind::Bandwidth;
    if (name == "connections") return ExperimentKind::Connections;
    if (name == "compare") return ExperimentKind::Compare;
    throw std::invalid_argument("unknown experiment kind '" + name + "'");
}

ExperimentSpec ExperimentSpec::with_defaults() const {
    ExperimentSpec spec = *this;
    if (spec.sweep.empty()) spec.sweep = default_sweep(kind, scenario);
    if (spec.seeds.empty()) {
        for (std::uint64_t s = 1; s <= 30; ++s) spec.seeds.push_back(s);
    }
    return spec;
}

void ExperimentSpec::validate() const {
    scenario.validate();
    algorithm.validate();
    if (sweep.empty()) throw std::invalid_argument("sweep must be non-empty");
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        if (!(sweep[i] > 0.0) || !std::isfinite(sweep[i])) {
            throw std::invalid_argument("sweep values must be positive");
        }
        if (i > 0 && sweep[i] <= sweep[i - 1]) {
            throw std::invalid_argument(
                "sweep values must be strictly increasing");
        }
    }
    if (seeds.empty()) throw std::invalid_argument("need at least one seed");
    if (out_dir.empty()) throw std::invalid_argument("out_dir must be set");
}

void save_manifest(const ExperimentSpec& spec, const std::string& path) {
    json j;
    j["format"] = "istn-manifest";
    j["version"] = 1;
    j["experiment"] = to_string(spec.kind);
    j["scenario"] = detail::config_to_json(spec.scenario);
    j["algorithm"] = options_to_json(spec.algorithm);
    j["greedy"] = {{"strict_paper", spec.greedy.strict_paper},
                   {"mean_ues", spec.greedy.mean_ues}};
    j["sweep"] = spec.sweep;
    j["seeds"] = spec.seeds;
    j["out_dir"] = spec.out_dir;
    detail::write_json_file(j, path, "manifest");
}

ExperimentSpec load_manifest(const std::string& path) {
    constexpr const char* kWhat = "manifest";
    const json j = detail::read_json_file(path, kWhat);
    if (require_field(j, "format", kWhat).get<std::string>() !=
        "istn-manifest") {
        throw std::runtime_error("manifest: unexpected format tag");
    }
    if (require_field(j, "version", kWhat).get<int>() != 1) {
        throw std::runtime_error("manifest: unsupported version");
    }
    ExperimentSpec spec;
    spec.kind = experiment_kind_from_string(
        require_field(j, "experiment", kWhat).get<std::string>());
    spec.scenario =
        detail::config_from_json(require_field(j, "scenario", kWhat));
    spec.algorithm = options_from_json(require_field(j, "algorithm", kWhat));
    const json& g = require_field(j, "greedy", kWhat);
    spec.greedy.strict_paper =
        require_field(g, "strict_paper", kWhat).get<bool>();
    spec.greedy.mean_ues = require_field(g, "mean_ues", kWhat).get<double>();
    spec.sweep = require_field(j, "sweep", kWhat).get<std::vector<double>>();
    spec.seeds = require_field(j, "seeds", kWhat)
                     .get<std::vector<std::uint64_t>>();
    spec.out_dir = require_field(j, "out_dir", kWhat).get<std::string>();
    return spec;
}

ExperimentSpec run_experiment(const ExperimentSpec& input) {
    const ExperimentSpec spec = input.with_defaults();
    spec.validate();
    fs::create_directories(spec.out_dir);
    save_manifest(spec, spec.out_dir + "/manifest.json");

    std::ofstream summary(spec.out_dir + "/summary.csv");
    std::ofstream connections(spec.out_dir + "/connections.csv");
    std::ofstream convergence;
    if (!summary || !connections) {
        throw std::runtime_error("cannot write result files under '" +
                                 spec.out_dir + "'");
    }
    summary << "experiment,sweep_value,seed,method,status,iterations,"
               "total_power_w,total_power_dbw,satisfaction,feasible\n";
    connections << "experiment,sweep_value,seed,method,satellite,"
                   "connections,bandwidth_used_hz\n";
    if (spec.kind == ExperimentKind::Convergence) {
        convergence.open(spec.out_dir + "/convergence.csv");
        convergence << "experiment,sweep_value,seed,iteration,objective_w,"
                       "objective_dbw\n";
    }

    const char* name = to_string(spec.kind);
    // Keyed by (sweep index, method) so aggregate rows come out in sweep
    // order with alg1 before greedy.
    std::map<std::pair<std::size_t, std::string>, Aggregate> aggregates;

    auto emit = [&](double value, std::uint64_t seed,
                    const std::string& method, const CellOutcome& out) {
        summary << name << ',' << fmt(value) << ',' << seed << ',' << method
                << ',' << out.status << ',' << out.iterations << ','
                << fmt(out.power_w) << ',' << fmt(watts_to_dbw(out.power_w))
                << ',' << fmt(out.satisfaction) << ',' << (out.feasible ? 1 : 0)
                << '\n';
        for (std::size_t m = 0; m < out.connections.size(); ++m) {
            connections << name << ',' << fmt(value) << ',' << seed << ','
                        << method << ',' << m << ',' << out.connections[m]
                        << ',' << fmt(out.bandwidth_used[m]) << '\n';
        }
    };

    for (std::size_t vi = 0; vi < spec.sweep.size(); ++vi) {
        const double value = spec.sweep[vi];
        for (const std::uint64_t seed : spec.seeds) {
            CellOutcome alg1, greedy;
            try {
                const ProblemInstance inst =
                    generate_scenario(cell_config(spec, value, seed));
                try {
                    alg1 = run_alg1_cell(inst, spec.algorithm);
                } catch (const std::exception&) {
                    alg1 = CellOutcome{};
                }
                try {
                    greedy = run_greedy_cell(inst, spec.greedy);
                } catch (const std::exception&) {
                    greedy = CellOutcome{};
                }
            } catch (const std::exception&) {
                // Scenario generation failed; both methods get Error rows.
            }
            emit(value, seed, "alg1", alg1);
            emit(value, seed, "greedy", greedy);
            if (convergence.is_open()) {
                for (std::size_t i = 0; i < alg1.trace.size(); ++i) {
                    convergence << name << ',' << fmt(value) << ',' << seed
                                << ',' << i << ',' << fmt(alg1.trace[i]) << ','
                                << fmt(watts_to_dbw(alg1.trace[i])) << '\n';
                }
            }
            const std::pair<const char*, const CellOutcome*> cells[] = {
                {"alg1", &alg1}, {"greedy", &greedy}};
            for (const auto& [method, out] : cells) {
                Aggregate& agg = aggregates[{vi, std::string(method)}];
                ++agg.num_seeds;
                if (out->feasible) {
                    ++agg.num_feasible;
                    agg.power_sum_feasible += out->power_w;
                }
                if (std::isfinite(out->satisfaction)) {
                    agg.satisfaction_sum += out->satisfaction;
                }
            }
        }
    }

    std::ofstream aggregate(spec.out_dir + "/aggregate.csv");
    aggregate << "experiment,sweep_value,method,num_seeds,num_feasible,"
                 "fraction_feasible,mean_power_w_feasible,mean_power_dbw,"
                 "mean_satisfaction\n";
    for (const auto& [key, agg] : aggregates) {
        const double mean_power =
            agg.num_feasible > 0
                ? agg.power_sum_feasible / agg.num_feasible
                : std::numeric_limits<double>::quiet_NaN();
        aggregate << name << ',' << fmt(spec.sweep[key.first]) << ','
                  << key.second << ',' << agg.num_seeds << ','
                  << agg.num_feasible << ','
                  << fmt(static_cast<double>(agg.num_feasible) /
                         agg.num_seeds)
                  << ',' << fmt(mean_power) << ','
                  << fmt(watts_to_dbw(mean_power)) << ','
                  << fmt(agg.satisfaction_sum / agg.num_seeds) << '\n';
    }
    return spec;
}

}  // namespace istn
