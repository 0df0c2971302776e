#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "ramus/geometry.hpp"

namespace ramus {

// One resolution level: K_l center positions drawn from the fine space and
// the nearest-center assignment of every fine position. The subsets B_j
// partition the fine index set; each center is its own nearest center, so no
// subset is empty. Ties break toward the lowest center index.
struct ResolutionLevel {
    int level_index = 0;          // 1-based; L is the finest
    std::vector<int> centers;     // fine indices of the K_l centers
    std::vector<int> parent_map;  // length K; fine index -> subset index in [0, K_l)

    int coarse_count() const { return static_cast<int>(centers.size()); }
    int fine_count() const { return static_cast<int>(parent_map.size()); }
    bool is_identity() const { return coarse_count() == fine_count(); }
};

// L nested-in-count resolution levels of one randomized decomposition.
struct MultiresDecomposition {
    std::vector<ResolutionLevel> levels; // coarse to fine; levels[L-1] is the identity
    std::uint64_t seed = 0;
    double sparsity = 0.0;
};

// K_l = round(K * s^(l-L)), half away from zero; K_L = K exactly.
std::vector<int> level_counts(int K, double s, int L);

// Centers drawn uniformly without replacement from the fine positions per
// level (levels are independent draws; only the counts are nested),
// parent maps by exhaustive nearest-neighbor scan. Deterministic per seed.
MultiresDecomposition build_decomposition(const SourceSpace& space, double s, int L,
                                          std::uint64_t rng_seed);

// Coarse column (j, a) = sum of fine columns (i, a) over i in B_j; equals
// lf * P for the copying prolongation P, making L x = L_coarse z exact for
// subset-constant x.
Eigen::MatrixXd restrict_leadfield(const Eigen::MatrixXd& lf, const ResolutionLevel& level);

// Copy each coarse value to all fine members of its subset, per axis.
Eigen::VectorXd prolong(const Eigen::VectorXd& z, const ResolutionLevel& level);

// Arithmetic mean over each subset, per axis; exact left inverse of prolong.
Eigen::VectorXd restrict_vector(const Eigen::VectorXd& x, const ResolutionLevel& level);

} // namespace ramus
