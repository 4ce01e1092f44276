#pragma once

#include "pmfht/point_cloud.hpp"
#include "pmfht/spatial.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace pmfht {

// Discrete Laplace-Beltrami operator in generalized form: the action on a
// signal f is B^{-1}(Q f), with Q symmetric (zero row sums) and B the
// positive diagonal of per-point cell areas.
struct LboPair {
    Eigen::SparseMatrix<double> Q;
    Eigen::VectorXd mass; // diagonal of B
    double t = 0.0;
    double delta = 0.0;

    Eigen::Index size() const { return mass.size(); }
};

// Gaussian-weighted assembly over all unordered pairs within delta:
//   q_ij = vol_i * vol_j / (4 pi t^2) * exp(-|p_i - p_j|^2 / (4 t)),
//   q_ii = -sum_{j != i} q_ij,  b_ii = vol_i.
// Pairs farther than delta contribute exactly zero (sparse truncation).
LboPair assemble_lbo(const PointCloud& cloud, const NeighborIndex& index,
                     const Eigen::VectorXd& weights, double t, double delta);

// B^{-1}(Q f).
Eigen::VectorXd apply_lbo(const LboPair& pair, const Eigen::VectorXd& f);

// Kernel bandwidth schedule t = epsilon^(1/2 + margin); margin defaults to
// 0.5, i.e. t = epsilon.
double default_t(double epsilon, double exponent_margin = 0.5);

} // namespace pmfht
