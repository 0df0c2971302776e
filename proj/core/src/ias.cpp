#include "ramus/ias.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "ramus/errors.hpp"

namespace ramus {

Eigen::VectorXd ias_x_update(const Eigen::MatrixXd& lf, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& theta, double sigma) {
    if (sigma <= 0.0) throw parameter_error("ias_x_update: sigma must be > 0");
    if (theta.size() != lf.cols())
        throw parameter_error("ias_x_update: theta length " + std::to_string(theta.size()) +
                              " != column count " + std::to_string(lf.cols()));
    if (y.size() != lf.rows()) throw parameter_error("ias_x_update: data length != row count");
    if ((theta.array() <= 0.0).any()) throw parameter_error("ias_x_update: theta must be positive");

    // |theta| under the root per the algorithm statement; positivity is
    // enforced above, so the absolute value is a guard, not a semantic.
    const Eigen::ArrayXd sqrt_theta = theta.array().abs().sqrt();
    const Eigen::MatrixXd scaled = lf * sqrt_theta.matrix().asDiagonal();

    // Rank update touches only the lower triangle (half the flops of the
    // full product); the LLT below reads the same triangle.
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(lf.rows(), lf.rows());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
    gram.diagonal().array() += sigma * sigma;
    const Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw numerical_error("ias_x_update: SPD factorization failed");
    const Eigen::VectorXd u = llt.solve(y);
    return theta.asDiagonal() * (lf.transpose() * u);
}

double objective(const Eigen::VectorXd& x, const Eigen::VectorXd& theta,
                 const Eigen::MatrixXd& lf, const Eigen::VectorXd& y, double sigma,
                 const HyperpriorConfig& hp) {
    hp.validate();
    if ((theta.array() <= 0.0).any()) throw parameter_error("objective: theta must be positive");

    const double misfit = (lf * x - y).squaredNorm() / (2.0 * sigma * sigma);
    const Eigen::ArrayXd t = theta.array();
    const Eigen::ArrayXd log_t = t.log();
    double value = misfit + (x.array().square() / (2.0 * t) + 0.5 * log_t).sum();
    if (hp.family == HyperpriorFamily::inverse_gamma) {
        value += ((hp.beta + 1.0) * log_t + hp.theta0 / t).sum();
    } else {
        value += ((1.0 - hp.beta) * log_t + t / hp.theta0).sum();
    }
    return value;
}

IasState ias_map(const Eigen::MatrixXd& lf, const Eigen::VectorXd& y, double sigma,
                 const HyperpriorConfig& hp, int n_iter, const Eigen::VectorXd* x_init) {
    if (n_iter < 1) throw parameter_error("ias_map: n_iter must be >= 1");
    hp.validate();

    IasState state;
    state.sigma = sigma;
    if (x_init != nullptr && x_init->size() != lf.cols())
        throw parameter_error("ias_map: x_init length != column count");

    if (x_init == nullptr || x_init->isZero(0.0)) {
        state.theta = Eigen::VectorXd::Constant(lf.cols(), hp.theta0);
    } else {
        state.theta = ias_theta_update(*x_init, hp);
    }

    state.objective_history.reserve(n_iter);
    for (int k = 0; k < n_iter; ++k) {
        state.x = ias_x_update(lf, y, state.theta, sigma);
        state.theta = ias_theta_update(state.x, hp);
        state.iteration = k + 1;
        state.objective_history.push_back(objective(state.x, state.theta, lf, y, sigma, hp));
    }
    return state;
}

} // namespace ramus
