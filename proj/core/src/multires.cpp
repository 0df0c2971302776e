#include "ramus/multires.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ramus/errors.hpp"
#include "ramus/rng.hpp"

namespace ramus {

std::vector<int> level_counts(int K, double s, int L) {
    if (K < 1) throw parameter_error("level_counts: K must be >= 1");
    if (!(s > 1.0)) throw parameter_error("level_counts: s must be > 1");
    if (L < 1) throw parameter_error("level_counts: L must be >= 1");

    std::vector<int> counts(L);
    for (int l = 1; l <= L; ++l) {
        if (l == L) {
            counts[l - 1] = K;
            continue;
        }
        const double raw = K * std::pow(s, static_cast<double>(l - L));
        // round half away from zero; raw > 0 here
        int k_l = static_cast<int>(std::floor(raw + 0.5));
        if (k_l < 1) k_l = 1;
        counts[l - 1] = k_l;
    }
    return counts;
}

namespace {

// Uniform draw of `take` distinct indices from [0, K) by partial
// Fisher-Yates; the result keeps the shuffle order (no sorting), so the
// center list order is itself seed-deterministic.
std::vector<int> sample_without_replacement(int K, int take, Rng& rng) {
    std::vector<int> pool(K);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < take; ++i) {
        const auto j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(K - i)));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(take);
    return pool;
}

} // namespace

MultiresDecomposition build_decomposition(const SourceSpace& space, double s, int L,
                                          std::uint64_t rng_seed) {
    const int K = space.count();
    const auto counts = level_counts(K, s, L);
    if (counts.front() < 1) throw parameter_error("build_decomposition: coarsest level is empty");

    MultiresDecomposition decomposition;
    decomposition.seed = rng_seed;
    decomposition.sparsity = s;
    decomposition.levels.reserve(L);

    Rng rng(rng_seed);
    for (int l = 1; l <= L; ++l) {
        ResolutionLevel level;
        level.level_index = l;
        const int K_l = counts[l - 1];

        if (K_l == K) {
            level.centers.resize(K);
            std::iota(level.centers.begin(), level.centers.end(), 0);
            level.parent_map = level.centers;
            decomposition.levels.push_back(std::move(level));
            continue;
        }

        Rng level_rng = rng.derive_stream(static_cast<std::uint64_t>(l));
        level.centers = sample_without_replacement(K, K_l, level_rng);

        level.parent_map.assign(K, 0);
        Eigen::Matrix<double, Eigen::Dynamic, 3> center_pos(K_l, 3);
        for (int j = 0; j < K_l; ++j) center_pos.row(j) = space.positions.row(level.centers[j]);
        for (int i = 0; i < K; ++i) {
            const Eigen::RowVector3d p = space.positions.row(i);
            int best = 0;
            double best_d2 = std::numeric_limits<double>::infinity();
            for (int j = 0; j < K_l; ++j) {
                const double d2 = (center_pos.row(j) - p).squaredNorm();
                // strict < keeps the lowest center index on exact ties
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = j;
                }
            }
            level.parent_map[i] = best;
        }
        decomposition.levels.push_back(std::move(level));
    }
    return decomposition;
}

Eigen::MatrixXd restrict_leadfield(const Eigen::MatrixXd& lf, const ResolutionLevel& level) {
    const int K = level.fine_count();
    if (lf.cols() != 3 * static_cast<Eigen::Index>(K))
        throw parameter_error("restrict_leadfield: lead field has " + std::to_string(lf.cols()) +
                              " columns, level expects " + std::to_string(3 * K));
    if (level.is_identity()) return lf;

    const int K_l = level.coarse_count();
    Eigen::MatrixXd coarse = Eigen::MatrixXd::Zero(lf.rows(), 3 * K_l);
    for (int i = 0; i < K; ++i) {
        const int j = level.parent_map[i];
        coarse.middleCols<3>(3 * j) += lf.middleCols<3>(3 * i);
    }
    return coarse;
}

Eigen::VectorXd prolong(const Eigen::VectorXd& z, const ResolutionLevel& level) {
    if (z.size() != 3 * static_cast<Eigen::Index>(level.coarse_count()))
        throw parameter_error("prolong: coarse vector length mismatch");
    const int K = level.fine_count();
    Eigen::VectorXd fine(3 * K);
    for (int i = 0; i < K; ++i) fine.segment<3>(3 * i) = z.segment<3>(3 * level.parent_map[i]);
    return fine;
}

Eigen::VectorXd restrict_vector(const Eigen::VectorXd& x, const ResolutionLevel& level) {
    const int K = level.fine_count();
    if (x.size() != 3 * static_cast<Eigen::Index>(K))
        throw parameter_error("restrict_vector: fine vector length mismatch");
    const int K_l = level.coarse_count();
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(3 * K_l);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(K_l);
    for (int i = 0; i < K; ++i) {
        const int j = level.parent_map[i];
        sums.segment<3>(3 * j) += x.segment<3>(3 * i);
        counts[j] += 1.0;
    }
    for (int j = 0; j < K_l; ++j) sums.segment<3>(3 * j) /= counts[j];
    return sums;
}

} // namespace ramus
