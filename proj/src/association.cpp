#include "istn/association.hpp"

#include <sstream>
#include <stdexcept>

namespace istn {

namespace {

constexpr double kColumnSumSlack = 1e-9;

void check_weight_matrix(const Eigen::MatrixXd& w, const char* name) {
    for (int c = 0; c < w.cols(); ++c) {
        double sum = 0.0;
        for (int r = 0; r < w.rows(); ++r) {
            const double v = w(r, c);
            if (!std::isfinite(v) || v < 0.0 || v > 1.0 + kColumnSumSlack) {
                std::ostringstream msg;
                msg << name << "(" << r << "," << c << ") = " << v
                    << " outside [0,1]";
                throw std::invalid_argument(msg.str());
            }
            sum += v;
        }
        if (sum > 1.0 + kColumnSumSlack) {
            std::ostringstream msg;
            msg << name << " column " << c << " sums to " << sum << " > 1";
            throw std::invalid_argument(msg.str());
        }
    }
}

void check_binary_matrix(const Eigen::MatrixXi& w, const char* name) {
    for (int c = 0; c < w.cols(); ++c) {
        int sum = 0;
        for (int r = 0; r < w.rows(); ++r) {
            const int v = w(r, c);
            if (v != 0 && v != 1) {
                std::ostringstream msg;
                msg << name << "(" << r << "," << c << ") = " << v
                    << " not in {0,1}";
                throw std::invalid_argument(msg.str());
            }
            sum += v;
        }
        if (sum > 1) {
            std::ostringstream msg;
            msg << name << " column " << c << " selects " << sum
                << " satellites";
            throw std::invalid_argument(msg.str());
        }
    }
}

int column_selection(const Eigen::MatrixXi& w, int col) {
    for (int r = 0; r < w.rows(); ++r) {
        if (w(r, col) == 1) return r;
    }
    return -1;
}

}  // namespace

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::MaxIter: return "MaxIter";
    }
    return "Unknown";
}

void FractionalAssociation::validate() const {
    if (bs.rows() != sue.rows()) {
        throw std::invalid_argument(
            "association matrices disagree on satellite count");
    }
    check_weight_matrix(sue, "sue weights");
    check_weight_matrix(bs, "bs weights");
}

int BinaryAssociation::sue_satellite(int k) const {
    return column_selection(sue, k);
}

int BinaryAssociation::bs_satellite(int n) const {
    return column_selection(bs, n);
}

void BinaryAssociation::validate() const {
    if (bs.rows() != sue.rows()) {
        throw std::invalid_argument(
            "association matrices disagree on satellite count");
    }
    check_binary_matrix(sue, "sue selection");
    check_binary_matrix(bs, "bs selection");
}

bool BinaryAssociation::operator==(const BinaryAssociation& other) const {
    return sue.rows() == other.sue.rows() && sue.cols() == other.sue.cols() &&
           bs.cols() == other.bs.cols() && sue == other.sue && bs == other.bs;
}

BinaryAssociation make_empty_association(int num_satellites, int num_sues,
                                         int num_bs) {
    BinaryAssociation assoc;
    assoc.sue = Eigen::MatrixXi::Zero(num_satellites, num_sues);
    assoc.bs = Eigen::MatrixXi::Zero(num_satellites, num_bs);
    return assoc;
}

FractionalAssociation to_fractional(const BinaryAssociation& assoc) {
    FractionalAssociation frac;
    frac.sue = assoc.sue.cast<double>();
    frac.bs = assoc.bs.cast<double>();
    return frac;
}

}  // namespace istn
