#pragma once

#include <utility>
#include <vector>

#include "istn/association.hpp"
#include "istn/instance.hpp"

namespace istn {

struct GreedyOptions {
    // Literal mode: per-satellite caps floor(count/M + 0.5) exactly, which
    // can exhaust total capacity before every terminal is assigned (10
    // terminals over 3 satellites caps at 3+3+3); and bandwidth weighting of
    // a BS by the configured mean UE count instead of its own cell size.
    // The default mode raises caps to at least ceil(count/M) so assignment
    // always completes, and weights each BS by its actual UE count.
    bool strict_paper = false;
    double mean_ues = 10.0;  // BS bandwidth weight in strict mode
};

struct GreedyResult {
    BinaryAssociation association;
    Allocation allocation;  // powers and the uniform per-satellite split
    bool feasible = false;  // every terminal assigned and demand met in cap
    double satisfaction = 0.0;  // fraction of terminals meeting demand
    double total_power_w = 0.0;
    // Terminals left out when strict caps deadlock; they transmit nothing
    // and count as unsatisfied.
    std::vector<int> unassigned_sues;
    std::vector<int> unassigned_bs;
};

// Per-satellite assignment caps (BS first, SUE second).
std::pair<int, int> greedy_caps(const ProblemInstance& inst,
                                const GreedyOptions& options = {});

// Capped best-channel association: repeatedly take the globally largest
// remaining gain; assign if the satellite has capacity (retiring the
// terminal), otherwise retire the satellite. BS pass first, then SUEs.
// Throws std::runtime_error if strict caps deadlock before completion.
BinaryAssociation greedy_associate(const ProblemInstance& inst,
                                   const GreedyOptions& options = {});

// Uniform split of each satellite's budget over its connection weights: one
// share per SUE, ue_count shares per BS (mean_ues shares in strict mode).
std::pair<Eigen::VectorXd, Eigen::VectorXd> greedy_bandwidth(
    const ProblemInstance& inst, const BinaryAssociation& assoc,
    const GreedyOptions& options = {});

// Closed-form per-link powers at the given bandwidths, clamped to the caps;
// terminals whose demand is unreachable within cap transmit at cap and are
// flagged unsatisfied. Never throws: infeasibility is reported in the result.
GreedyResult greedy_power(const ProblemInstance& inst,
                          const BinaryAssociation& assoc,
                          const Eigen::VectorXd& w_sue,
                          const Eigen::VectorXd& w_bs);

// Full pipeline; strict-mode deadlocks leave terminals unassigned (listed in
// the result) instead of throwing.
GreedyResult run_greedy(const ProblemInstance& inst,
                        const GreedyOptions& options = {});

}  // namespace istn
