#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "istn/assoc_solver.hpp"
#include "istn/convex_solver.hpp"
#include "istn/rng.hpp"
#include "test_util.hpp"

using namespace istn;
using test::kNoise;
using test::make_instance;

namespace {

Allocation make_allocation(const ProblemInstance& inst) {
    Allocation alloc;
    alloc.p_sue = Eigen::MatrixXd::Zero(inst.num_satellites, inst.num_sues);
    alloc.p_bs = Eigen::MatrixXd::Zero(inst.num_satellites, inst.num_bs);
    alloc.w_sue = Eigen::VectorXd::Zero(inst.num_sues);
    alloc.w_bs = Eigen::VectorXd::Zero(inst.num_bs);
    return alloc;
}

// Frozen state mimicking a converged subproblem: every terminal gets an
// equal slice of the first satellite's budget and demand-tight powers on a
// chosen satellite; other links stay zero (priced by backfill).
Allocation frozen_state(const ProblemInstance& inst, int sat) {
    Allocation alloc = make_allocation(inst);
    const int total = inst.num_sues + inst.num_bs;
    const double share = inst.bandwidth_leo(sat) / total;
    for (int k = 0; k < inst.num_sues; ++k) {
        alloc.w_sue(k) = share;
        alloc.p_sue(sat, k) = min_power_for_rate(
            inst.demand_sue(k), share, inst.gain_sue(sat, k), kNoise);
    }
    for (int n = 0; n < inst.num_bs; ++n) {
        alloc.w_bs(n) = share;
        alloc.p_bs(sat, n) = min_power_for_rate(
            inst.demand_bs(n), share, inst.gain_bs(sat, n), kNoise);
    }
    return alloc;
}

}  // namespace

TEST_CASE("single choice is selected with its frozen power") {
    ProblemInstance inst = make_instance(1, 1, 0);
    inst.gain_sue(0, 0) = 2e-12;
    Allocation alloc = frozen_state(inst, 0);
    const auto result = solve_association(inst, alloc);
    REQUIRE(result.report.status == SolveStatus::Optimal);
    CHECK(result.association.sue_satellite(0) == 0);
    CHECK(result.report.objective ==
          doctest::Approx(alloc.p_sue(0, 0)).epsilon(1e-12));
}

TEST_CASE("terminals move to a cheaper satellite at their frozen bandwidth") {
    // Satellite 1 has 4x the gain, so the backfilled closed-form power is
    // cheaper there; the budget fits the terminal on either side.
    ProblemInstance inst = make_instance(2, 1, 0);
    inst.gain_sue(0, 0) = 1e-12;
    inst.gain_sue(1, 0) = 4e-12;
    Allocation alloc = frozen_state(inst, 0);
    const auto result = solve_association(inst, alloc);
    REQUIRE(result.report.status == SolveStatus::Optimal);
    CHECK(result.association.sue_satellite(0) == 1);
    const double expect = min_power_for_rate(inst.demand_sue(0),
                                             alloc.w_sue(0), 4e-12, kNoise);
    CHECK(result.report.objective == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("bandwidth budgets force a split") {
    // Both terminals prefer satellite 0, but its budget only fits one frozen
    // bandwidth; the optimum parks the one that loses less on satellite 1.
    ProblemInstance inst = make_instance(2, 2, 0);
    inst.bandwidth_leo(0) = 2.5e8;
    inst.bandwidth_leo(1) = 2.5e8;
    inst.gain_sue(0, 0) = 4e-12;
    inst.gain_sue(1, 0) = 3.9e-12;  // terminal 0 barely cares
    inst.gain_sue(0, 1) = 4e-12;
    inst.gain_sue(1, 1) = 1e-12;  // terminal 1 cares a lot
    Allocation alloc = make_allocation(inst);
    for (int k = 0; k < 2; ++k) {
        alloc.w_sue(k) = 2.5e8;  // each frozen share fills a whole budget
        alloc.p_sue(0, k) = min_power_for_rate(inst.demand_sue(k), 2.5e8,
                                               inst.gain_sue(0, k), kNoise);
    }
    const auto result = solve_association(inst, alloc);
    REQUIRE(result.report.status == SolveStatus::Optimal);
    CHECK(result.association.sue_satellite(0) == 1);
    CHECK(result.association.sue_satellite(1) == 0);

    const auto oracle = enumerate_association_oracle(inst, alloc);
    REQUIRE(oracle.report.status == SolveStatus::Optimal);
    CHECK(result.report.objective ==
          doctest::Approx(oracle.report.objective).epsilon(1e-12));
    CHECK(result.association == oracle.association);
}

TEST_CASE("exact ties resolve to the lexicographically first selection") {
    ProblemInstance inst = make_instance(2, 1, 1);
    inst.gain_sue.setConstant(2e-12);  // identical columns -> exact tie
    inst.gain_bs.setConstant(2e-12);
    Allocation alloc = frozen_state(inst, 0);
    const auto result = solve_association(inst, alloc);
    const auto oracle = enumerate_association_oracle(inst, alloc);
    REQUIRE(result.report.status == SolveStatus::Optimal);
    CHECK(result.association.sue_satellite(0) == 0);
    CHECK(result.association.bs_satellite(0) == 0);
    CHECK(result.association == oracle.association);
}

TEST_CASE("demands beyond every cap certify infeasibility") {
    ProblemInstance inst = make_instance(2, 1, 0);
    inst.gain_sue.setConstant(1e-13);
    inst.demand_sue(0) = 1e10;  // R/W = 20 over the full budget
    Allocation alloc = make_allocation(inst);
    alloc.w_sue(0) = inst.bandwidth_leo(0);
    const auto result = solve_association(inst, alloc);
    const auto oracle = enumerate_association_oracle(inst, alloc);
    CHECK(result.report.status == SolveStatus::Infeasible);
    CHECK(oracle.report.status == SolveStatus::Infeasible);
}

TEST_CASE("zero frozen bandwidth leaves a terminal unservable") {
    ProblemInstance inst = make_instance(1, 1, 0);
    Allocation alloc = make_allocation(inst);  // w_sue(0) == 0
    const auto result = solve_association(inst, alloc);
    CHECK(result.report.status == SolveStatus::Infeasible);
}

TEST_CASE("random micro-instances match the enumeration oracle") {
    Rng rng(404);
    int infeasible_seen = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int sats = 1 + (trial % 2);
        const int sues = 1 + static_cast<int>(rng.uniform() * 3.0);
        const int bs = static_cast<int>(rng.uniform() * 3.0);
        ProblemInstance inst = test::random_instance(rng, sats, sues, bs);

        Allocation alloc = make_allocation(inst);
        for (int k = 0; k < sues; ++k) {
            alloc.w_sue(k) = rng.uniform(2e7, 1.5e8);
            const int sat = static_cast<int>(rng.uniform() * sats);
            // Powers near the demand-tight value, sometimes left at zero to
            // exercise the backfill path.
            if (rng.uniform() < 0.8) {
                alloc.p_sue(sat, k) =
                    min_power_for_rate(inst.demand_sue(k), alloc.w_sue(k),
                                       inst.gain_sue(sat, k), kNoise) *
                    rng.uniform(1.0, 1.4);
            }
        }
        for (int n = 0; n < bs; ++n) {
            alloc.w_bs(n) = rng.uniform(2e7, 1.5e8);
            const int sat = static_cast<int>(rng.uniform() * sats);
            if (rng.uniform() < 0.8) {
                alloc.p_bs(sat, n) =
                    min_power_for_rate(inst.demand_bs(n), alloc.w_bs(n),
                                       inst.gain_bs(sat, n), kNoise) *
                    rng.uniform(1.0, 1.4);
            }
        }

        const auto fast = solve_association(inst, alloc);
        const auto slow = enumerate_association_oracle(inst, alloc);
        REQUIRE(fast.report.status != SolveStatus::MaxIter);
        CHECK(fast.report.status == slow.report.status);
        if (fast.report.status == SolveStatus::Optimal) {
            CHECK(fast.report.objective ==
                  doctest::Approx(slow.report.objective).epsilon(1e-9));
        } else {
            ++infeasible_seen;
        }
    }
    // The mix must exercise both verdicts to mean anything.
    CHECK(infeasible_seen > 0);
    CHECK(infeasible_seen < 60);
}

TEST_CASE("node limit reports MaxIter on a fractional root") {
    // Budget 1.5 shares on the preferred satellite makes the root relaxation
    // split a terminal across satellites, so one node cannot finish.
    ProblemInstance inst = make_instance(2, 2, 0);
    inst.bandwidth_leo(0) = 1.5e8;
    inst.gain_sue(0, 0) = 4e-12;
    inst.gain_sue(1, 0) = 1e-12;
    inst.gain_sue(0, 1) = 4e-12;
    inst.gain_sue(1, 1) = 2e-12;
    Allocation alloc = make_allocation(inst);
    for (int k = 0; k < 2; ++k) {
        alloc.w_sue(k) = 1e8;
        alloc.p_sue(0, k) = min_power_for_rate(inst.demand_sue(k), 1e8,
                                               inst.gain_sue(0, k), kNoise);
    }
    AssociationOptions limited;
    limited.node_limit = 1;
    const auto cut = solve_association(inst, alloc, limited);
    CHECK(cut.report.status == SolveStatus::MaxIter);

    const auto full = solve_association(inst, alloc);
    const auto oracle = enumerate_association_oracle(inst, alloc);
    REQUIRE(full.report.status == SolveStatus::Optimal);
    CHECK(full.report.objective ==
          doctest::Approx(oracle.report.objective).epsilon(1e-12));
    CHECK(full.association.sue_satellite(0) == 0);
    CHECK(full.association.sue_satellite(1) == 1);
}

TEST_CASE("enumeration oracle refuses oversized instances") {
    ProblemInstance inst = make_instance(10, 5, 3);
    Allocation alloc = make_allocation(inst);
    CHECK_THROWS_AS(enumerate_association_oracle(inst, alloc),
                    std::invalid_argument);
}
