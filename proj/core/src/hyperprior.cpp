#include "ramus/hyperprior.hpp"

#include <cmath>
#include <limits>

#include "ramus/errors.hpp"

namespace ramus {

void HyperpriorConfig::validate() const {
    if (!(theta0 > 0.0)) throw parameter_error("HyperpriorConfig: theta0 must be > 0");
    if (family == HyperpriorFamily::inverse_gamma) {
        if (!(beta >= 1.5)) throw parameter_error("HyperpriorConfig: IG requires beta >= 1.5");
    } else {
        if (!(beta > 0.0)) throw parameter_error("HyperpriorConfig: G requires beta > 0");
    }
}

Eigen::VectorXd ias_theta_update(const Eigen::VectorXd& x, const HyperpriorConfig& hp) {
    hp.validate();
    Eigen::VectorXd theta(x.size());
    if (hp.family == HyperpriorFamily::inverse_gamma) {
        const double kappa = hp.kappa();
        theta = (x.array().square() * 0.5 + hp.theta0) / kappa;
    } else {
        const double eta = hp.eta();
        constexpr double floor = std::numeric_limits<double>::min();
        if (eta >= 0.0) {
            theta = (0.5 * hp.theta0) *
                    (eta + (eta * eta + 2.0 * x.array().square() / hp.theta0).sqrt());
        } else {
            // eta + sqrt(eta^2 + c) cancels catastrophically for c << eta^2;
            // the conjugate form x^2 / (sqrt(eta^2 + c) - eta) is exact in the
            // same limit (theta* ~ x^2 / (2|eta|)) and agrees elsewhere.
            theta = x.array().square() /
                    ((eta * eta + 2.0 * x.array().square() / hp.theta0).sqrt() - eta);
        }
        theta = theta.array().max(floor);
    }
    return theta;
}

} // namespace ramus
