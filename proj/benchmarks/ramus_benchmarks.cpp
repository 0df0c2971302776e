// Microbenchmarks for the hot paths: the x-update dominates the scan, the
// lead-field restriction and decomposition builds are the per-level setup
// costs, and the end-to-end reconstruction ties them together.
#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "ramus/geometry.hpp"
#include "ramus/hyperprior.hpp"
#include "ramus/ias.hpp"
#include "ramus/leadfield.hpp"
#include "ramus/multires.hpp"
#include "ramus/ramus.hpp"
#include "ramus/rng.hpp"

namespace {

Eigen::MatrixXd gaussian_matrix(std::uint64_t seed, int rows, int cols) {
    ramus::Rng rng(seed);
    Eigen::MatrixXd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = rng.gaussian();
    return m;
}

Eigen::VectorXd gaussian_vector(std::uint64_t seed, int n) {
    ramus::Rng rng(seed);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.gaussian();
    return v;
}

void BM_IasXUpdate(benchmark::State& state) {
    const int m = 102;
    const int n = static_cast<int>(state.range(0));
    const Eigen::MatrixXd lf = gaussian_matrix(1, m, n);
    const Eigen::VectorXd y = gaussian_vector(2, m);
    Eigen::VectorXd theta = gaussian_vector(3, n).cwiseAbs();
    theta.array() += 1e-6;
    for (auto _ : state) {
        Eigen::VectorXd x = ramus::ias_x_update(lf, y, theta, 0.05);
        benchmark::DoNotOptimize(x.data());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_IasXUpdate)->Arg(2400)->Arg(9600)->Arg(19200)->Unit(benchmark::kMillisecond);

void BM_BuildDecomposition(benchmark::State& state) {
    const int K = static_cast<int>(state.range(0));
    const ramus::SourceSpace space = ramus::generate_source_space(K, 87.0, 42);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        ramus::MultiresDecomposition dec = ramus::build_decomposition(space, 8.0, 3, seed++);
        benchmark::DoNotOptimize(dec.levels.back().parent_map.data());
    }
}
BENCHMARK(BM_BuildDecomposition)->Arg(1600)->Arg(6400)->Unit(benchmark::kMillisecond);

void BM_RestrictLeadfield(benchmark::State& state) {
    const int K = 6400;
    const ramus::SourceSpace space = ramus::generate_source_space(K, 87.0, 42);
    const ramus::MultiresDecomposition dec = ramus::build_decomposition(space, 8.0, 3, 7);
    const Eigen::MatrixXd lf = gaussian_matrix(4, 102, 3 * K);
    const ramus::ResolutionLevel& coarsest = dec.levels.front();
    for (auto _ : state) {
        Eigen::MatrixXd coarse = ramus::restrict_leadfield(lf, coarsest);
        benchmark::DoNotOptimize(coarse.data());
    }
}
BENCHMARK(BM_RestrictLeadfield)->Unit(benchmark::kMillisecond);

void BM_EegLeadfield(benchmark::State& state) {
    const ramus::SourceSpace space = ramus::generate_source_space(800, 87.0, 42);
    const ramus::SensorArray sensors =
        ramus::build_upper_hemisphere_sensors(102, 100.0, ramus::SensorKind::eeg);
    for (auto _ : state) {
        ramus::LeadField lf = ramus::eeg_sphere_leadfield(space, sensors, 0.33, 100.0, 240);
        benchmark::DoNotOptimize(lf.matrix.data());
    }
}
BENCHMARK(BM_EegLeadfield)->Unit(benchmark::kMillisecond);

void BM_RamusReconstruct(benchmark::State& state) {
    const int K = static_cast<int>(state.range(0));
    const ramus::SourceSpace space = ramus::generate_source_space(K, 87.0, 42);
    const ramus::SensorArray sensors =
        ramus::build_upper_hemisphere_sensors(102, 100.0, ramus::SensorKind::eeg);
    const ramus::LeadField lf = ramus::eeg_sphere_leadfield(space, sensors, 0.33, 100.0, 120);
    Eigen::VectorXd y = lf.matrix.col(17) + 0.4 * lf.matrix.col(3 * (K / 2));
    y /= y.cwiseAbs().maxCoeff();
    ramus::RamusConfig cfg;
    cfg.levels = 3;
    cfg.sparsity = 8.0;
    cfg.decompositions = 5;
    cfg.hyperprior.theta0 = 1e-6;
    cfg.n_iter = 10;
    cfg.sigma = 0.03;
    cfg.rng_seed = 11;
    for (auto _ : state) {
        ramus::Reconstruction rec = ramus::ramus_reconstruct(lf, space, y, cfg);
        benchmark::DoNotOptimize(rec.x_final.data());
    }
}
BENCHMARK(BM_RamusReconstruct)->Arg(800)->Arg(1600)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
