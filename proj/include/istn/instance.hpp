#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "istn/channel.hpp"
#include "istn/geometry.hpp"

namespace istn {

// All data one optimization run needs: link gains, demands, budgets. Gains
// are linear, bandwidths Hz, powers W, rates bit/s. Immutable after build;
// safe to share across threads.
struct ProblemInstance {
    int num_satellites = 0;  // M
    int num_bs = 0;          // N
    int num_sues = 0;        // K

    Eigen::MatrixXd gain_sue;  // M x K, h
    Eigen::MatrixXd gain_bs;   // M x N, g

    Eigen::VectorXd demand_sue;  // K, bit/s
    Eigen::VectorXd demand_bs;   // N, bit/s (sum of the cell's per-UE demands)

    Eigen::VectorXd p_max_sue;  // K, W
    Eigen::VectorXd p_max_bs;   // N, W

    Eigen::VectorXd bandwidth_leo;  // M, Hz
    Eigen::VectorXd noise_density;  // M, W/Hz

    std::vector<int> ue_counts;  // N, L_n >= 1

    std::uint64_t seed = 0;  // provenance; 0 when hand-written

    void validate() const;  // throws std::invalid_argument
};

// Geometry, constellation and random-generation parameters for one scenario.
// Defaults reproduce the reference setup: a 25 km^2 square footprint under a
// 3-satellite polar-orbit snapshot.
struct ScenarioConfig {
    double area_side_m = 5000.0;
    GeodeticPoint center{40.0, 20.0, 0.0};
    int num_satellites = 3;
    int num_bs = 10;
    int num_sues = 10;
    double mean_ues_per_bs = 10.0;
    double demand_per_user_bps = 1e8;
    double sat_altitude_m = 340e3;
    double lat_spacing_deg = 0.02;
    ChannelParams channel;
    double p_max_sue_dbw = 20.0;
    double p_max_bs_dbw = 40.0;
    double bandwidth_leo_hz = 500e6;
    // Per-satellite override of bandwidth_leo_hz; empty = uniform budgets.
    std::vector<double> bandwidth_leo_override_hz;
    std::uint64_t rng_seed = 1;

    void validate() const;  // throws std::invalid_argument
};

// Deterministic per seed: terminals uniform in the square, per-cell UE counts
// zero-truncated Poisson, gains from the channel model. Throws
// std::runtime_error if some terminal falls outside every satellite's main
// lobe (all boresight arguments beyond the first Bessel null).
ProblemInstance generate_scenario(const ScenarioConfig& config);

// Instance files are self-describing JSON documents; see README for the
// schema. Loading validates and names the offending field on error.
void save_instance(const ProblemInstance& inst, const std::string& path);
ProblemInstance load_instance(const std::string& path);

void save_config(const ScenarioConfig& config, const std::string& path);
ScenarioConfig load_config(const std::string& path);

}  // namespace istn
