#pragma once

#include <Eigen/Core>
#include <string>

namespace istn {

enum class SolveStatus { Optimal, Infeasible, MaxIter };

const char* to_string(SolveStatus status);

// Relaxed association weights: sue(m,k) is the weight of SUE k on satellite
// m, bs(m,n) likewise for base stations. Column sums stay <= 1 (each terminal
// served by at most one satellite, in expectation under the relaxation).
struct FractionalAssociation {
    Eigen::MatrixXd sue;  // M x K, in [0,1]
    Eigen::MatrixXd bs;   // M x N, in [0,1]

    int num_satellites() const { return static_cast<int>(sue.rows()); }
    int num_sues() const { return static_cast<int>(sue.cols()); }
    int num_bs() const { return static_cast<int>(bs.cols()); }

    void validate() const;  // throws std::invalid_argument
};

// Integral association: entries exactly 0/1, column sums <= 1. A zero column
// means the terminal is unassigned.
struct BinaryAssociation {
    Eigen::MatrixXi sue;  // M x K
    Eigen::MatrixXi bs;   // M x N

    int num_satellites() const { return static_cast<int>(sue.rows()); }
    int num_sues() const { return static_cast<int>(sue.cols()); }
    int num_bs() const { return static_cast<int>(bs.cols()); }

    // Satellite serving the terminal, or -1 if unassigned.
    int sue_satellite(int k) const;
    int bs_satellite(int n) const;

    void validate() const;  // throws std::invalid_argument

    bool operator==(const BinaryAssociation& other) const;
};

BinaryAssociation make_empty_association(int num_satellites, int num_sues,
                                         int num_bs);

FractionalAssociation to_fractional(const BinaryAssociation& assoc);

// Transmit powers (W) per link and bandwidths (Hz) per terminal. Links with
// zero association weight carry exactly zero power.
struct Allocation {
    Eigen::MatrixXd p_sue;  // M x K
    Eigen::MatrixXd p_bs;   // M x N
    Eigen::VectorXd w_sue;  // K
    Eigen::VectorXd w_bs;   // N
};

struct SolveReport {
    double objective = 0.0;     // total weighted transmit power, W
    double kkt_residual = 0.0;  // dimensionless, scaled problem
    int iterations = 0;         // Newton steps (convex) / nodes (integer)
    SolveStatus status = SolveStatus::Optimal;
};

}  // namespace istn
