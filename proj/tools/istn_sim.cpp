#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "istn/alternating.hpp"
#include "istn/detail/json_io.hpp"
#include "istn/greedy.hpp"
#include "istn/harness.hpp"
#include "istn/instance.hpp"
#include "istn/units.hpp"

namespace {

using istn::detail::json;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;

json vector_to_json(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

// Per-terminal transmit power: links off the serving satellite are exactly
// zero, so the column sum is the terminal's power.
json column_sums_to_json(const Eigen::MatrixXd& m) {
    std::vector<double> v(static_cast<std::size_t>(m.cols()));
    for (int c = 0; c < m.cols(); ++c) {
        v[static_cast<std::size_t>(c)] = m.col(c).sum();
    }
    return v;
}

json association_to_json(const istn::BinaryAssociation& assoc) {
    std::vector<int> sue, bs;
    for (int k = 0; k < assoc.sue.cols(); ++k) {
        sue.push_back(assoc.sue_satellite(k));
    }
    for (int n = 0; n < assoc.bs.cols(); ++n) {
        bs.push_back(assoc.bs_satellite(n));
    }
    return json{{"sue_satellite", sue}, {"bs_satellite", bs}};
}

json allocation_to_json(const istn::Allocation& alloc) {
    return json{{"p_sue_w", column_sums_to_json(alloc.p_sue)},
                {"p_bs_w", column_sums_to_json(alloc.p_bs)},
                {"w_sue_hz", vector_to_json(alloc.w_sue)},
                {"w_bs_hz", vector_to_json(alloc.w_bs)}};
}

void write_solution_file(const json& body, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    istn::detail::write_json_file(body, out_dir + "/solution.json",
                                  "solution");
}

void print_power_line(double watts) {
    std::printf("total power   %.6g W (%.4f dBW)\n", watts,
                istn::watts_to_dbw(watts));
}

int run_alg1(const istn::ProblemInstance& inst,
             const istn::AlgorithmConfig& config, const std::string& out_dir) {
    const istn::Solution sol = istn::run_algorithm1(inst, config);
    std::printf("method        alg1\n");
    std::printf("status        %s\n", istn::to_string(sol.status));
    std::printf("iterations    %d\n", sol.iterations);
    if (sol.status != istn::AlgorithmStatus::Infeasible) {
        print_power_line(sol.objective_w);
        std::printf("satisfaction  %.4f\n", sol.satisfaction);
        std::printf("connections  ");
        for (const int c : sol.per_leo_connections) std::printf(" %d", c);
        std::printf("\n");
    }
    if (!out_dir.empty()) {
        json body;
        body["format"] = "istn-solution";
        body["version"] = 1;
        body["method"] = "alg1";
        body["status"] = istn::to_string(sol.status);
        body["objective_w"] = sol.objective_w;
        body["objective_dbw"] = istn::watts_to_dbw(sol.objective_w);
        body["satisfaction"] = sol.satisfaction;
        body["iterations"] = sol.iterations;
        body["fallback_iteration"] = sol.fallback_iteration;
        body["association"] = association_to_json(sol.association);
        body["allocation"] = allocation_to_json(sol.allocation);
        body["per_leo_connections"] = sol.per_leo_connections;
        body["objective_trace_w"] = sol.objective_trace;
        write_solution_file(body, out_dir);
    }
    return sol.status == istn::AlgorithmStatus::Infeasible ? kExitInfeasible
                                                           : kExitOk;
}

int run_greedy_cli(const istn::ProblemInstance& inst,
                   const istn::GreedyOptions& options,
                   const std::string& out_dir) {
    const istn::GreedyResult result = istn::run_greedy(inst, options);
    std::printf("method        greedy\n");
    std::printf("status        %s\n",
                result.feasible ? "Feasible" : "Infeasible");
    print_power_line(result.total_power_w);
    std::printf("satisfaction  %.4f\n", result.satisfaction);
    if (!result.unassigned_sues.empty() || !result.unassigned_bs.empty()) {
        std::printf("unassigned    %zu SUEs, %zu BSs\n",
                    result.unassigned_sues.size(),
                    result.unassigned_bs.size());
    }
    if (!out_dir.empty()) {
        json body;
        body["format"] = "istn-solution";
        body["version"] = 1;
        body["method"] = "greedy";
        body["status"] = result.feasible ? "Feasible" : "Infeasible";
        body["objective_w"] = result.total_power_w;
        body["objective_dbw"] = istn::watts_to_dbw(result.total_power_w);
        body["satisfaction"] = result.satisfaction;
        body["association"] = association_to_json(result.association);
        body["allocation"] = allocation_to_json(result.allocation);
        body["unassigned_sues"] = result.unassigned_sues;
        body["unassigned_bs"] = result.unassigned_bs;
        write_solution_file(body, out_dir);
    }
    return result.feasible ? kExitOk : kExitInfeasible;
}

// Sweep values below 1e4 are convenience units (Mbps for demand sweeps, MHz
// for bandwidth sweeps); anything larger is taken as already bit/s or Hz.
std::vector<double> scale_sweep(const std::vector<double>& raw,
                                istn::ExperimentKind kind) {
    const bool scalable = kind == istn::ExperimentKind::Demand ||
                          kind == istn::ExperimentKind::Bandwidth ||
                          kind == istn::ExperimentKind::Connections;
    std::vector<double> out;
    out.reserve(raw.size());
    for (const double v : raw) {
        out.push_back(scalable && v < 1e4 ? v * 1e6 : v);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LEO uplink association and resource allocation simulator"};
    app.require_subcommand(1);

    std::string instance_path, config_path, out_dir, manifest_path;
    std::string algorithm = "alg1";
    std::string experiment_name = "convergence";
    std::uint64_t seed = 0;
    int beam_exponent = 2;
    int max_iters = 100;
    int num_seeds = 0;
    double rho = 0.7, eps = 1e-4;
    bool strict_paper = false;
    std::vector<double> sweep_raw;
    std::vector<std::uint64_t> seed_list;

    auto add_scenario_opts = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path,
                        "Scenario config JSON (defaults when omitted)")
            ->check(CLI::ExistingFile);
        cmd->add_option("--seed", seed, "Scenario RNG seed override");
        cmd->add_option("--beam-exponent", beam_exponent,
                        "Antenna pattern exponent override")
            ->check(CLI::IsMember({1, 2}));
    };
    auto add_algorithm_opts = [&](CLI::App* cmd) {
        cmd->add_option("--rho", rho, "Association update rate in (0,1]");
        cmd->add_option("--eps", eps, "Relative convergence threshold");
        cmd->add_option("--max-iters", max_iters,
                        "Alternating iteration cap");
        cmd->add_flag("--strict-paper", strict_paper,
                      "Literal greedy caps and mean-count BS weighting");
    };

    CLI::App* generate =
        app.add_subcommand("generate", "Write a random scenario instance");
    add_scenario_opts(generate);
    generate->add_option("--out", out_dir, "Instance file to write")
        ->required();

    CLI::App* solve =
        app.add_subcommand("solve", "Solve one instance or seeded scenario");
    solve->add_option("--instance", instance_path, "Instance JSON to solve")
        ->check(CLI::ExistingFile);
    add_scenario_opts(solve);
    add_algorithm_opts(solve);
    solve
        ->add_option("--algorithm", algorithm,
                     "Solution method: alternating optimization or baseline")
        ->check(CLI::IsMember({"alg1", "greedy"}));
    solve->add_option("--out", out_dir, "Directory for solution.json");

    CLI::App* greedy =
        app.add_subcommand("greedy", "Run the greedy baseline only");
    greedy->add_option("--instance", instance_path, "Instance JSON to solve")
        ->check(CLI::ExistingFile);
    add_scenario_opts(greedy);
    greedy->add_flag("--strict-paper", strict_paper,
                     "Literal greedy caps and mean-count BS weighting");
    greedy->add_option("--out", out_dir, "Directory for solution.json");

    CLI::App* experiment =
        app.add_subcommand("experiment", "Run a multi-seed sweep");
    experiment
        ->add_option("--experiment", experiment_name, "Sweep kind")
        ->check(CLI::IsMember({"convergence", "demand", "bandwidth",
                               "connections", "compare"}));
    experiment->add_option(
        "--manifest", manifest_path,
        "Re-run a saved manifest (flags other than --out are ignored)")
        ->check(CLI::ExistingFile);
    add_scenario_opts(experiment);
    add_algorithm_opts(experiment);
    experiment
        ->add_option("--sweep", sweep_raw,
                     "Comma list of sweep values; below 1e4 they are read "
                     "as Mbps (demand) or MHz (bandwidth)")
        ->delimiter(',');
    experiment->add_option("--seeds", seed_list, "Comma list of seeds")
        ->delimiter(',');
    experiment->add_option("--num-seeds", num_seeds,
                           "Shorthand for --seeds 1..n");
    experiment->add_option("--out", out_dir, "Results directory")->required();

    CLI::App* validate =
        app.add_subcommand("validate", "Check an instance or config file");
    validate
        ->add_option("--instance", instance_path, "Instance JSON to check")
        ->check(CLI::ExistingFile);
    validate->add_option("--config", config_path, "Config JSON to check")
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        auto make_config = [&](const CLI::App* cmd) {
            istn::ScenarioConfig cfg;
            if (!config_path.empty()) cfg = istn::load_config(config_path);
            if (cmd->count("--seed") > 0) cfg.rng_seed = seed;
            if (cmd->count("--beam-exponent") > 0) {
                cfg.channel.beam_pattern_exponent = beam_exponent;
            }
            return cfg;
        };
        auto make_instance = [&](const CLI::App* cmd) {
            if (!instance_path.empty()) {
                return istn::load_instance(instance_path);
            }
            return istn::generate_scenario(make_config(cmd));
        };
        auto make_algorithm = [&] {
            istn::AlgorithmConfig config;
            config.rho = rho;
            config.eps = eps;
            config.max_iters = max_iters;
            return config;
        };

        if (app.got_subcommand(generate)) {
            const istn::ProblemInstance inst =
                istn::generate_scenario(make_config(generate));
            istn::save_instance(inst, out_dir);
            std::printf("wrote %s: %d satellites, %d SUEs, %d BSs\n",
                        out_dir.c_str(), inst.num_satellites, inst.num_sues,
                        inst.num_bs);
            return kExitOk;
        }

        if (app.got_subcommand(solve)) {
            const istn::ProblemInstance inst = make_instance(solve);
            if (algorithm == "greedy") {
                return run_greedy_cli(inst, {strict_paper}, out_dir);
            }
            return run_alg1(inst, make_algorithm(), out_dir);
        }

        if (app.got_subcommand(greedy)) {
            return run_greedy_cli(make_instance(greedy), {strict_paper},
                                  out_dir);
        }

        if (app.got_subcommand(experiment)) {
            istn::ExperimentSpec spec;
            if (!manifest_path.empty()) {
                spec = istn::load_manifest(manifest_path);
            } else {
                spec.kind =
                    istn::experiment_kind_from_string(experiment_name);
                spec.scenario = make_config(experiment);
                spec.algorithm = make_algorithm();
                spec.greedy.strict_paper = strict_paper;
                spec.sweep = scale_sweep(sweep_raw, spec.kind);
                spec.seeds = seed_list;
                if (spec.seeds.empty() && num_seeds > 0) {
                    for (int s = 1; s <= num_seeds; ++s) {
                        spec.seeds.push_back(
                            static_cast<std::uint64_t>(s));
                    }
                }
            }
            spec.out_dir = out_dir;
            const istn::ExperimentSpec run = istn::run_experiment(spec);
            std::printf("experiment %s: %zu sweep values x %zu seeds -> %s\n",
                        istn::to_string(run.kind), run.sweep.size(),
                        run.seeds.size(), run.out_dir.c_str());
            return kExitOk;
        }

        if (app.got_subcommand(validate)) {
            if (instance_path.empty() && config_path.empty()) {
                std::fprintf(stderr,
                             "validate: give --instance and/or --config\n");
                return kExitUsage;
            }
            if (!instance_path.empty()) {
                const istn::ProblemInstance inst =
                    istn::load_instance(instance_path);
                std::printf("instance OK: %d satellites, %d SUEs, %d BSs\n",
                            inst.num_satellites, inst.num_sues, inst.num_bs);
            }
            if (!config_path.empty()) {
                istn::load_config(config_path).validate();
                std::printf("config OK\n");
            }
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInfeasible;
    }
    return kExitUsage;
}
