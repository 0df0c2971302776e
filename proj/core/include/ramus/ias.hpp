#pragma once

#include <vector>

#include <Eigen/Core>

#include "ramus/hyperprior.hpp"

namespace ramus {

// Snapshot of the alternating iteration after the final sweep.
struct IasState {
    Eigen::VectorXd x;
    Eigen::VectorXd theta;
    int iteration = 0;
    double sigma = 0.0;
    // objective value after each completed sweep (length n_iter)
    std::vector<double> objective_history;
};

// Exact minimizer of the posterior in x given theta:
//   x = D L^T (L D L^T + sigma^2 I)^{-1} y, D = diag(theta),
// solved through the m x m SPD system (m << 3K throughout this project).
Eigen::VectorXd ias_x_update(const Eigen::MatrixXd& lf, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& theta, double sigma);

// Joint negative log posterior up to an additive constant:
//   ||Lx - y||^2 / (2 sigma^2) + sum_i [ x_i^2/(2 theta_i) + (1/2) ln theta_i ]
//   + IG: (beta+1) ln theta_i + theta0/theta_i | G: (1-beta) ln theta_i + theta_i/theta0
double objective(const Eigen::VectorXd& x, const Eigen::VectorXd& theta,
                 const Eigen::MatrixXd& lf, const Eigen::VectorXd& y, double sigma,
                 const HyperpriorConfig& hp);

// Alternating exact minimization, n_iter sweeps of x-update then theta-update.
// theta starts uniform at theta0 when x_init is null or all-zero, otherwise at
// ias_theta_update(x_init) (the only coupling consistent with the alternating
// order: theta is what the x-update consumes).
IasState ias_map(const Eigen::MatrixXd& lf, const Eigen::VectorXd& y, double sigma,
                 const HyperpriorConfig& hp, int n_iter,
                 const Eigen::VectorXd* x_init = nullptr);

} // namespace ramus
