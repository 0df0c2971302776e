#pragma once

#include <Eigen/Core>

namespace ramus {

enum class HyperpriorFamily { gamma, inverse_gamma };

// Hyperprior on the per-source variances theta: gamma (G) or inverse gamma
// (IG) with shape beta and scale theta0.
struct HyperpriorConfig {
    HyperpriorFamily family = HyperpriorFamily::inverse_gamma;
    double beta = 1.5;
    double theta0 = 1e-10;

    // eta enters the G update, kappa the IG update.
    double eta() const { return beta - 1.5; }
    double kappa() const { return beta + 1.5; }

    // Throws parameter_error unless theta0 > 0 and beta is admissible for the
    // family (IG: beta >= 1.5, the smallest usable shape; G: beta > 0).
    void validate() const;
};

// Elementwise theta-minimization given x:
//   G:  theta_i = (theta0/2) (eta + sqrt(eta^2 + 2 x_i^2 / theta0))
//   IG: theta_i = (theta0 + x_i^2 / 2) / kappa
// Every output is strictly positive; the G branch at eta = 0, x_i = 0 is
// clamped to the smallest positive double to honor that invariant.
Eigen::VectorXd ias_theta_update(const Eigen::VectorXd& x, const HyperpriorConfig& hp);

} // namespace ramus
