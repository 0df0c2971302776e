#include "ramus/ramus.hpp"

#include <cmath>
#include <string>

#include "ramus/errors.hpp"
#include "ramus/ias.hpp"
#include "ramus/rng.hpp"

namespace ramus {

void RamusConfig::validate() const {
    if (levels < 1) throw parameter_error("RamusConfig: levels must be >= 1");
    if (!(sparsity > 1.0)) throw parameter_error("RamusConfig: sparsity must be > 1");
    if (decompositions < 1) throw parameter_error("RamusConfig: decompositions must be >= 1");
    if (n_iter < 1) throw parameter_error("RamusConfig: n_iter must be >= 1");
    if (!(sigma > 0.0)) throw parameter_error("RamusConfig: sigma must be > 0");
    hyperprior.validate();
}

Eigen::VectorXd level_mean(const std::vector<Eigen::VectorXd>& snapshots, double s, int L) {
    if (static_cast<int>(snapshots.size()) != L)
        throw parameter_error("level_mean: expected " + std::to_string(L) + " snapshots, got " +
                              std::to_string(snapshots.size()));
    double denominator = 0.0;
    for (int l = 1; l <= L; ++l) denominator += std::pow(s, static_cast<double>(L - l));

    Eigen::VectorXd sum = snapshots.front();
    for (int l = 1; l < L; ++l) {
        if (snapshots[l].size() != sum.size())
            throw parameter_error("level_mean: snapshot length mismatch at level " +
                                  std::to_string(l + 1));
        sum += snapshots[l];
    }
    return sum / denominator;
}

Reconstruction ramus_reconstruct(const LeadField& lf, const SourceSpace& space,
                                 const Eigen::VectorXd& y, const RamusConfig& cfg,
                                 const Eigen::VectorXd* x_init, bool keep_level_snapshots) {
    cfg.validate();
    const int K = space.count();
    if (lf.cols() != 3 * static_cast<Eigen::Index>(K))
        throw parameter_error("ramus_reconstruct: lead field columns != 3K");
    if (y.size() != lf.rows())
        throw parameter_error("ramus_reconstruct: data length != lead field rows");
    if (x_init != nullptr && x_init->size() != 3 * static_cast<Eigen::Index>(K))
        throw parameter_error("ramus_reconstruct: x_init length != 3K");

    Reconstruction rec;
    rec.per_decomposition.reserve(cfg.decompositions);
    if (keep_level_snapshots) rec.per_level_snapshots.emplace();

    const Rng seed_source(cfg.rng_seed);
    // Default starting guess is zero, reproducing the cold uniform-theta0
    // start of the plain algorithm at the very first solve.
    Eigen::VectorXd guess =
        (x_init != nullptr) ? *x_init : Eigen::VectorXd::Zero(3 * K);
    Eigen::VectorXd mean_accumulator = Eigen::VectorXd::Zero(3 * K);

    for (int k = 0; k < cfg.decompositions; ++k) {
        const auto decomposition = build_decomposition(
            space, cfg.sparsity, cfg.levels,
            seed_source.derive_stream(static_cast<std::uint64_t>(k)).next_u64());

        std::vector<Eigen::VectorXd> snapshots;
        snapshots.reserve(cfg.levels);
        for (const auto& level : decomposition.levels) {
            const Eigen::MatrixXd coarse_lf = restrict_leadfield(lf.matrix, level);
            const Eigen::VectorXd coarse_guess =
                level.is_identity() ? guess : restrict_vector(guess, level);

            const IasState state =
                ias_map(coarse_lf, y, cfg.sigma, cfg.hyperprior, cfg.n_iter, &coarse_guess);
            if (!state.x.allFinite())
                throw numerical_error("ramus_reconstruct: non-finite estimate at decomposition " +
                                      std::to_string(k + 1) + ", level " +
                                      std::to_string(level.level_index));

            Eigen::VectorXd fine = level.is_identity() ? state.x : prolong(state.x, level);
            guess = fine;
            snapshots.push_back(std::move(fine));
        }

        Eigen::VectorXd decomposition_mean = level_mean(snapshots, cfg.sparsity, cfg.levels);
        guess = decomposition_mean;
        mean_accumulator += decomposition_mean;
        rec.per_decomposition.push_back(std::move(decomposition_mean));
        if (keep_level_snapshots) rec.per_level_snapshots->push_back(std::move(snapshots));
    }

    rec.x_final = mean_accumulator / cfg.decompositions;
    return rec;
}

AmplitudeSummary reconstruction_summary(const Reconstruction& rec, const SourceSpace& space) {
    const int K = space.count();
    if (rec.x_final.size() != 3 * static_cast<Eigen::Index>(K))
        throw parameter_error("reconstruction_summary: reconstruction length != 3K");

    AmplitudeSummary summary;
    summary.amplitudes.resize(K);
    for (int j = 0; j < K; ++j) summary.amplitudes[j] = rec.x_final.segment<3>(3 * j).norm();
    summary.global_max = 0.0;
    for (int j = 0; j < K; ++j) {
        if (summary.amplitudes[j] > summary.global_max) {
            summary.global_max = summary.amplitudes[j];
            summary.argmax = j;
        }
    }
    return summary;
}

} // namespace ramus
