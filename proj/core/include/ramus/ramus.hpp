#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ramus/hyperprior.hpp"
#include "ramus/leadfield.hpp"
#include "ramus/multires.hpp"

namespace ramus {

// Parameters of the full randomized multiresolution scan.
struct RamusConfig {
    int levels = 3;          // L
    double sparsity = 8.0;   // s
    int decompositions = 100; // D
    HyperpriorConfig hyperprior;
    int n_iter = 10;         // IAS sweeps per level
    double sigma = 0.0;      // likelihood std in (normalized) data units
    std::uint64_t rng_seed = 0;

    void validate() const;
};

// Final estimate with per-decomposition provenance. All vectors live on the
// fine grid (3K entries).
struct Reconstruction {
    Eigen::VectorXd x_final;                       // cross-decomposition mean
    std::vector<Eigen::VectorXd> per_decomposition; // normalized level means, one per decomposition
    // present when requested: per_level_snapshots[k][l] is level l+1's
    // estimate of decomposition k+1 prolonged to the fine grid
    std::optional<std::vector<std::vector<Eigen::VectorXd>>> per_level_snapshots;
};

// Normalized level mean: (sum_l x^(l)) / (sum_l s^(L-l)), balancing the
// multiplied source count of the prolonged coarse estimates.
Eigen::VectorXd level_mean(const std::vector<Eigen::VectorXd>& snapshots, double s, int L);

// The full scan: D decompositions built from seeds derived from
// cfg.rng_seed; within each, coarse-to-fine IAS solves chained through
// restrict_vector/prolong initial guesses; level means chained across
// decompositions; final estimate is the mean of the level means. The
// decomposition loop is inherently sequential.
Reconstruction ramus_reconstruct(const LeadField& lf, const SourceSpace& space,
                                 const Eigen::VectorXd& y, const RamusConfig& cfg,
                                 const Eigen::VectorXd* x_init = nullptr,
                                 bool keep_level_snapshots = false);

// Per-position amplitude field of a reconstruction.
struct AmplitudeSummary {
    Eigen::VectorXd amplitudes;       // length K, Euclidean norm of each 3-vector moment
    double global_max = 0.0;
    std::optional<int> argmax;        // absent for the all-zero field
};
AmplitudeSummary reconstruction_summary(const Reconstruction& rec, const SourceSpace& space);

} // namespace ramus
