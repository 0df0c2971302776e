#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ramus/errors.hpp"
#include "ramus/experiment.hpp"
#include "ramus/rng.hpp"

using namespace ramus;

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

// Source list holding both protocol dipole positions exactly, plus fillers
// outside every ROI.
SourceSpace protocol_space() {
    SourceSpace space;
    space.positions.resize(6, 3);
    space.positions << -5, 0, 77, // superficial dipole, exactly
        7, 0, 5,                  // deep dipole, exactly
        40, 0, 0,                 // fillers, > 30 mm from both dipoles
        0, 40, 0,                 //
        0, 0, -40,                //
        -5, 0, 60;                // inside the superficial ROI (17 mm away)
    space.max_radius = 87.0;
    return space;
}

LeadField random_leadfield(int rows, int K, std::uint64_t seed) {
    LeadField lf;
    lf.modality = Modality::eeg;
    lf.matrix.resize(rows, 3 * K);
    Rng rng(seed);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < 3 * K; ++j) lf.matrix(i, j) = rng.gaussian();
    return lf;
}

Reconstruction from_vector(Eigen::VectorXd x) {
    Reconstruction rec;
    rec.x_final = std::move(x);
    return rec;
}

ExperimentSetup small_setup() {
    ExperimentSetup setup;
    setup.source_count = 250;
    setup.sensor_count = 24;
    setup.series_terms = 100;
    setup.levels = 2;
    setup.n_iter = 4;
    setup.theta0 = 1e-4;
    setup.realizations = 3;
    setup.master_seed = 1;
    return setup;
}

CasePreset small_preset() {
    CasePreset p;
    p.id = 'X';
    p.modality = Modality::eeg;
    p.sparsity = 8.0;
    p.decompositions = 3;
    p.family = HyperpriorFamily::inverse_gamma;
    p.deep_amplitude = 10.0;
    p.superficial_amplitude = 5.0;
    p.noise_pct = 3.0;
    return p;
}

} // namespace

TEST_SUITE("experiment.truth") {

TEST_CASE("ground truth pins both dipoles' geometry") {
    const GroundTruth truth = make_ground_truth(5.0, 10.0);
    REQUIRE(truth.dipoles.size() == 2);
    CHECK(truth.roi_diameter_mm == 60.0);

    const Dipole& sup = truth.dipoles[roi_superficial];
    CHECK((sup.position_mm - Eigen::Vector3d(-5.0, 0.0, 77.0)).norm() == 0.0);
    CHECK(sup.amplitude == 5.0);
    CHECK(sup.moment.norm() == doctest::Approx(5.0).epsilon(1e-14));
    const double a_sup = 11.0 * 3.14159265358979323846 / 180.0;
    CHECK(sup.moment[0] == doctest::Approx(5.0 * std::cos(a_sup)).epsilon(1e-14));
    CHECK(sup.moment[1] == 0.0);
    CHECK(sup.moment[2] == doctest::Approx(5.0 * std::sin(a_sup)).epsilon(1e-14));

    const Dipole& deep = truth.dipoles[roi_deep];
    CHECK((deep.position_mm - Eigen::Vector3d(7.0, 0.0, 5.0)).norm() == 0.0);
    CHECK(deep.amplitude == 10.0);
    const double a_deep = 68.0 * 3.14159265358979323846 / 180.0;
    CHECK(deep.moment[0] == doctest::Approx(10.0 * std::cos(a_deep)).epsilon(1e-14));
    CHECK(deep.moment[2] == doctest::Approx(10.0 * std::sin(a_deep)).epsilon(1e-14));

    const GroundTruth silent = make_ground_truth(0.0, 10.0);
    CHECK(silent.dipoles[roi_superficial].moment.norm() == 0.0);
    CHECK_THROWS_AS(make_ground_truth(-1.0, 5.0), parameter_error);
}

TEST_CASE("the benchmark case table is frozen") {
    const auto& table = case_presets();
    REQUIRE(table.size() == 9);
    const struct {
        char id;
        Modality modality;
        double sparsity;
        int decompositions;
        HyperpriorFamily family;
        double deep, sup;
    } expected[9] = {
        {'A', Modality::eeg, 8.0, 100, HyperpriorFamily::inverse_gamma, 10.0, 5.0},
        {'B', Modality::eeg, 8.0, 100, HyperpriorFamily::inverse_gamma, 10.0, 0.0},
        {'C', Modality::eeg, 8.0, 100, HyperpriorFamily::inverse_gamma, 0.0, 5.0},
        {'D', Modality::eeg, 8.0, 100, HyperpriorFamily::inverse_gamma, 10.0, 7.0},
        {'E', Modality::eeg, 5.0, 100, HyperpriorFamily::inverse_gamma, 10.0, 7.0},
        {'F', Modality::eeg, 8.0, 20, HyperpriorFamily::inverse_gamma, 10.0, 7.0},
        {'G', Modality::eeg, 8.0, 100, HyperpriorFamily::gamma, 10.0, 5.0},
        {'H', Modality::combined, 8.0, 100, HyperpriorFamily::inverse_gamma, 10.0, 5.0},
        {'I', Modality::combined, 8.0, 100, HyperpriorFamily::inverse_gamma, 10.0, 7.0},
    };
    for (int i = 0; i < 9; ++i) {
        const CasePreset& p = table[i];
        CHECK(p.id == expected[i].id);
        CHECK(p.modality == expected[i].modality);
        CHECK(p.sparsity == expected[i].sparsity);
        CHECK(p.decompositions == expected[i].decompositions);
        CHECK(p.family == expected[i].family);
        CHECK(p.deep_amplitude == expected[i].deep);
        CHECK(p.superficial_amplitude == expected[i].sup);
        CHECK(p.noise_pct == 3.0);
    }
    CHECK(case_preset('G').family == HyperpriorFamily::gamma);
    CHECK_THROWS_AS(case_preset('Z'), parameter_error);
}

} // TEST_SUITE

TEST_SUITE("experiment.simulate") {

TEST_CASE("noiseless simulation normalizes the clean signal to unit max") {
    const SourceSpace space = protocol_space();
    const LeadField lf = random_leadfield(8, space.count(), 2);
    const GroundTruth truth = make_ground_truth(5.0, 10.0);

    const SimulatedData sim = simulate_measurements(lf, space, truth, 0.0, 77);
    CHECK(sim.data.cwiseAbs().maxCoeff() == 1.0);
    CHECK(sim.sigma_effective == 0.0);
    REQUIRE(sim.source_indices.size() == 2);
    CHECK(sim.source_indices[0] == 0);
    CHECK(sim.source_indices[1] == 1);
    CHECK(sim.snap_distances_mm[0] == 0.0);
    CHECK(sim.snap_distances_mm[1] == 0.0);

    // data * (1/scale) recovers the clean signal up to one rounding
    Eigen::VectorXd clean = lf.matrix.middleCols<3>(0) * truth.dipoles[0].moment +
                            lf.matrix.middleCols<3>(3) * truth.dipoles[1].moment;
    const Eigen::VectorXd recovered = sim.data / sim.scale;
    CHECK((recovered - clean).cwiseAbs().maxCoeff() <= 1e-14 * clean.cwiseAbs().maxCoeff());
}

TEST_CASE("noisy simulation still pins the max-abs entry to exactly one") {
    const SourceSpace space = protocol_space();
    const LeadField lf = random_leadfield(10, space.count(), 3);
    const GroundTruth truth = make_ground_truth(5.0, 10.0);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const SimulatedData sim = simulate_measurements(lf, space, truth, 3.0, seed);
        CHECK(sim.data.cwiseAbs().maxCoeff() == 1.0);
        CHECK(sim.sigma_effective > 0.0);
    }
}

TEST_CASE("simulation is deterministic per seed") {
    const SourceSpace space = protocol_space();
    const LeadField lf = random_leadfield(8, space.count(), 4);
    const GroundTruth truth = make_ground_truth(5.0, 10.0);
    const SimulatedData a = simulate_measurements(lf, space, truth, 3.0, 9);
    const SimulatedData b = simulate_measurements(lf, space, truth, 3.0, 9);
    CHECK((a.data - b.data).cwiseAbs().maxCoeff() == 0.0);
    const SimulatedData c = simulate_measurements(lf, space, truth, 3.0, 10);
    CHECK((a.data - c.data).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("noise realizations match the requested percentage level") {
    const SourceSpace space = protocol_space();
    const LeadField lf = random_leadfield(40, space.count(), 5);
    const GroundTruth truth = make_ground_truth(5.0, 10.0);

    Eigen::VectorXd clean = lf.matrix.middleCols<3>(0) * truth.dipoles[0].moment +
                            lf.matrix.middleCols<3>(3) * truth.dipoles[1].moment;
    const double expected_std = 0.03 * clean.cwiseAbs().maxCoeff();

    double sumsq = 0.0;
    const int reps = 10000;
    for (int r = 0; r < reps; ++r) {
        const SimulatedData sim =
            simulate_measurements(lf, space, truth, 3.0, 1000 + std::uint64_t(r));
        const Eigen::VectorXd noise = sim.data / sim.scale - clean;
        sumsq += noise.squaredNorm();
    }
    const double empirical = std::sqrt(sumsq / (double(reps) * clean.size()));
    CHECK(empirical == doctest::Approx(expected_std).epsilon(0.03));
}

TEST_CASE("structurally silent configurations are rejected") {
    const SourceSpace space = protocol_space();
    const LeadField lf = random_leadfield(8, space.count(), 6);
    CHECK_THROWS_AS(
        simulate_measurements(lf, space, make_ground_truth(0.0, 0.0), 3.0, 1),
        degenerate_input_error);
    CHECK_THROWS_AS(
        simulate_measurements(lf, space, make_ground_truth(5.0, 10.0), -1.0, 1),
        parameter_error);
}

} // TEST_SUITE

TEST_SUITE("experiment.metrics") {

TEST_CASE("a one-hot reconstruction at the true dipole scores perfectly") {
    const SourceSpace space = protocol_space();
    const GroundTruth truth = make_ground_truth(5.0, 10.0);

    Eigen::VectorXd x = Eigen::VectorXd::Zero(3 * space.count());
    x.segment<3>(0) = truth.dipoles[roi_superficial].moment;
    const Reconstruction rec = from_vector(x);

    const RoiMetrics sup = roi_metrics(rec, space, truth, roi_superficial);
    CHECK(sup.position_error <= 1e-12);
    CHECK(sup.angle_error <= 1e-5);
    CHECK(std::abs(sup.log10_amplitude_error) <= 1e-12);
    CHECK(sup.relative_max == 1.0);
    CHECK(sup.detected);
    CHECK_FALSE(sup.undefined_position);

    // the deep ROI saw nothing: undefined position, not detected
    const RoiMetrics deep = roi_metrics(rec, space, truth, roi_deep);
    CHECK(deep.undefined_position);
    CHECK_FALSE(deep.detected);
    CHECK(std::isnan(deep.position_error));
    CHECK(std::isnan(deep.angle_error));
    CHECK(deep.log10_amplitude_error == -std::numeric_limits<double>::infinity());
    CHECK(deep.relative_max == 0.0);
}

TEST_CASE("the center of mass weighs ROI members by amplitude") {
    const SourceSpace space = protocol_space();
    const GroundTruth truth = make_ground_truth(5.0, 10.0);

    // two spikes inside the superficial ROI: amplitude 3 at (-5,0,77),
    // amplitude 4 at (-5,0,60)
    Eigen::VectorXd x = Eigen::VectorXd::Zero(3 * space.count());
    x.segment<3>(0) = Eigen::Vector3d(0.0, 0.0, 3.0);
    x.segment<3>(3 * 5) = Eigen::Vector3d(0.0, 4.0, 0.0);
    const RoiMetrics m = roi_metrics(from_vector(x), space, truth, roi_superficial);

    const Eigen::Vector3d com =
        (3.0 * Eigen::Vector3d(-5, 0, 77) + 4.0 * Eigen::Vector3d(-5, 0, 60)) / 7.0;
    const double expected = (com - Eigen::Vector3d(-5, 0, 77)).norm();
    CHECK(m.position_error == doctest::Approx(expected).epsilon(1e-12));

    // moment sum (0,4,3): angle against the true 11-degree x-z moment
    const Eigen::Vector3d sum(0.0, 4.0, 3.0);
    const Eigen::Vector3d t = truth.dipoles[roi_superficial].moment;
    const double expected_angle =
        std::acos(sum.dot(t) / (sum.norm() * t.norm())) * 180.0 / 3.14159265358979323846;
    CHECK(m.angle_error == doctest::Approx(expected_angle).epsilon(1e-12));
    CHECK(m.log10_amplitude_error ==
          doctest::Approx(std::log10(5.0 / 5.0)).epsilon(1e-12));
}

TEST_CASE("negating the reconstruction flips the angle and nothing else") {
    const SourceSpace space = protocol_space();
    const GroundTruth truth = make_ground_truth(5.0, 10.0);
    Rng rng(31);
    Eigen::VectorXd x(3 * space.count());
    for (int i = 0; i < x.size(); ++i) x[i] = rng.gaussian();

    const RoiMetrics a = roi_metrics(from_vector(x), space, truth, roi_superficial);
    const RoiMetrics b = roi_metrics(from_vector(-x), space, truth, roi_superficial);
    CHECK(b.position_error == doctest::Approx(a.position_error).epsilon(1e-12));
    CHECK(b.relative_max == doctest::Approx(a.relative_max).epsilon(1e-12));
    CHECK(b.log10_amplitude_error ==
          doctest::Approx(a.log10_amplitude_error).epsilon(1e-12));
    CHECK(b.angle_error == doctest::Approx(180.0 - a.angle_error).epsilon(1e-10));
}

TEST_CASE("detection is scale-invariant and uses a strict 0.1 threshold") {
    const SourceSpace space = protocol_space();
    const GroundTruth truth = make_ground_truth(5.0, 10.0);
    Rng rng(33);
    Eigen::VectorXd x(3 * space.count());
    for (int i = 0; i < x.size(); ++i) x[i] = rng.gaussian();

    const RoiMetrics a = roi_metrics(from_vector(x), space, truth, roi_superficial);
    const RoiMetrics b = roi_metrics(from_vector(3.0 * x), space, truth, roi_superficial);
    CHECK(b.relative_max == doctest::Approx(a.relative_max).epsilon(1e-14));
    CHECK(b.detected == a.detected);
    CHECK(b.position_error == doctest::Approx(a.position_error).epsilon(1e-12));

    // relative max exactly 0.1 is below the strict threshold
    Eigen::VectorXd edge = Eigen::VectorXd::Zero(3 * space.count());
    edge.segment<3>(0) = Eigen::Vector3d(0.0, 0.0, 1.0);   // ROI spike
    edge.segment<3>(3 * 2) = Eigen::Vector3d(0.0, 0.0, 10.0); // global max outside
    const RoiMetrics m = roi_metrics(from_vector(edge), space, truth, roi_superficial);
    CHECK(m.relative_max == 0.1);
    CHECK_FALSE(m.detected);
}

TEST_CASE("an ROI with no source positions is a geometry error") {
    SourceSpace space;
    space.positions.resize(2, 3);
    space.positions << -5, 0, 77, 40, 0, 0; // nothing within 30 mm of (7,0,5)
    space.max_radius = 87.0;
    const GroundTruth truth = make_ground_truth(5.0, 10.0);
    const Reconstruction rec = from_vector(Eigen::VectorXd::Zero(6));
    CHECK_THROWS_AS(roi_metrics(rec, space, truth, roi_deep), geometry_error);
    CHECK_THROWS_AS(roi_metrics(rec, space, truth, 7), parameter_error);
}

} // TEST_SUITE

TEST_SUITE("experiment.stats") {

TEST_CASE("median and percentiles interpolate order statistics") {
    const std::vector<double> s{1.0, 2.0, 3.0, 4.0};
    CHECK(sample_median(s) == 2.5);
    CHECK(sample_percentile(s, 0.05) == doctest::Approx(1.15).epsilon(1e-12));
    CHECK(sample_percentile(s, 0.95) == doctest::Approx(3.85).epsilon(1e-12));
    CHECK(sample_percentile(s, 0.0) == 1.0);
    CHECK(sample_percentile(s, 1.0) == 4.0);

    CHECK(sample_median({5.0, 1.0, 9.0}) == 5.0);
    CHECK(sample_median({7.0}) == 7.0);
    CHECK(sample_percentile({7.0}, 0.05) == 7.0);
    CHECK(sample_percentile({7.0}, 0.95) == 7.0);
}

TEST_CASE("NaN entries sort last") {
    CHECK(sample_median({3.0, nan_v, 1.0}) == 3.0);
    CHECK(sample_percentile({3.0, nan_v, 1.0}, 0.0) == 1.0);
    CHECK(std::isnan(sample_percentile({3.0, nan_v, 1.0}, 1.0)));
}

TEST_CASE("summaries keep the raw sample and recompute bitwise") {
    Rng rng(41);
    std::vector<double> sample;
    for (int i = 0; i < 33; ++i) sample.push_back(rng.gaussian());
    const HistogramSummary s = summarize_sample(sample);
    CHECK(s.sample == sample); // original order preserved
    CHECK(sample_median(s.sample) == s.median);
    CHECK(sample_percentile(s.sample, 0.05) == s.lower_90);
    CHECK(sample_percentile(s.sample, 0.95) == s.upper_90);
}

TEST_CASE("degenerate statistics inputs are rejected") {
    CHECK_THROWS_AS(sample_median({}), parameter_error);
    CHECK_THROWS_AS(sample_percentile({}, 0.5), parameter_error);
    CHECK_THROWS_AS(sample_percentile({1.0}, -0.1), parameter_error);
    CHECK_THROWS_AS(sample_percentile({1.0}, 1.1), parameter_error);
}

} // TEST_SUITE

TEST_SUITE("experiment.run_case") {

TEST_CASE("a small run produces coherent records, CSV, and JSON") {
    const CasePreset preset = small_preset();
    const ExperimentSetup setup = small_setup();
    const CaseResult result = run_case(preset, setup);

    REQUIRE(result.realizations.size() == 3);
    CHECK(result.wall_seconds > 0.0);
    REQUIRE(result.snap_distances_mm.size() == 2);

    const Rng master(setup.master_seed);
    for (int r = 0; r < 3; ++r) {
        CHECK(result.realizations[r].index == r);
        CHECK(result.realizations[r].noise_seed ==
              master.derive_stream(2 * std::uint64_t(r)).next_u64());
        CHECK(result.realizations[r].reconstruction_seed ==
              master.derive_stream(2 * std::uint64_t(r) + 1).next_u64());
    }

    const std::string csv = metrics_csv(result);
    CHECK(csv.rfind("case_id,roi,realization_seed,position_error,angle_error,"
                    "log10_amplitude_error,relative_max,detected\n",
                    0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    CHECK(csv.find("X,superficial,") != std::string::npos);
    CHECK(csv.find("X,deep,") != std::string::npos);

    const nlohmann::json j = nlohmann::json::parse(summary_json(result));
    CHECK(j["case_id"] == "X");
    CHECK(j["realizations"] == 3);
    CHECK(j["modality"] == "EEG");
    CHECK(j["hyperprior"] == "IG");
    CHECK(j["rois"]["superficial"]["detection_rate_pct"].get<double>() >= 0.0);
    CHECK(j["rois"]["deep"]["detection_rate_pct"].get<double>() <= 100.0);
    CHECK(j["snap_distances_mm"].size() == 2);
}

TEST_CASE("metrics are byte-identical across reruns and thread counts") {
    const CasePreset preset = small_preset();
    ExperimentSetup setup = small_setup();

    const std::string first = metrics_csv(run_case(preset, setup));
    const std::string second = metrics_csv(run_case(preset, setup));
    CHECK(first == second);

    setup.threads = 3;
    const std::string threaded = metrics_csv(run_case(preset, setup));
    CHECK(first == threaded);
}

TEST_CASE("a supplied lead field must match and reproduces the built-in model") {
    const CasePreset preset = small_preset();
    const ExperimentSetup setup = small_setup();

    const SourceSpace space =
        generate_source_space(setup.source_count, setup.source_radius_mm, setup.source_seed);
    const SensorArray electrodes = build_upper_hemisphere_sensors(
        setup.sensor_count, setup.sensor_radius_mm, SensorKind::eeg);
    const LeadField lf = eeg_sphere_leadfield(space, electrodes, setup.conductivity_s_per_m,
                                              setup.head_radius_mm, setup.series_terms);

    const std::string with_override = metrics_csv(run_case(preset, setup, &lf));
    const std::string built_in = metrics_csv(run_case(preset, setup));
    CHECK(with_override == built_in);

    LeadField wrong = lf;
    wrong.modality = Modality::meg;
    CHECK_THROWS_AS(run_case(preset, setup, &wrong), parameter_error);
    LeadField truncated = lf;
    truncated.matrix = lf.matrix.leftCols(30);
    CHECK_THROWS_AS(run_case(preset, setup, &truncated), parameter_error);
}

TEST_CASE("combined-modality presets run against the stacked lead field") {
    CasePreset preset = small_preset();
    preset.modality = Modality::combined;
    ExperimentSetup setup = small_setup();
    setup.sensor_count = 16;
    setup.realizations = 2;
    const CaseResult result = run_case(preset, setup);
    CHECK(result.realizations.size() == 2);
    const nlohmann::json j = nlohmann::json::parse(summary_json(result));
    CHECK(j["modality"] == "E/MEG");
}

TEST_CASE("a silent superficial dipole still yields a well-formed run") {
    CasePreset preset = small_preset();
    preset.superficial_amplitude = 0.0; // deep-only signal
    ExperimentSetup setup = small_setup();
    setup.realizations = 2;
    const CaseResult result = run_case(preset, setup);
    const std::string csv = metrics_csv(result);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    // JSON must stay parseable even when metrics carry NaN or infinities.
    const nlohmann::json parsed = nlohmann::json::parse(summary_json(result));
    CHECK(parsed.at("realizations") == 2);
}

TEST_CASE("invalid run configurations are rejected") {
    CasePreset preset = small_preset();
    ExperimentSetup setup = small_setup();
    preset.noise_pct = 0.0;
    CHECK_THROWS_AS(run_case(preset, setup), parameter_error);
    preset = small_preset();
    setup.realizations = 0;
    CHECK_THROWS_AS(run_case(preset, setup), parameter_error);
    setup = small_setup();
    setup.theta0 = 0.0;
    CHECK_THROWS_AS(run_case(preset, setup), parameter_error);
}

} // TEST_SUITE

TEST_SUITE("experiment.histograms") {

namespace {

CaseResult synthetic_result(int n, double deep_rm, double sup_rm) {
    CaseResult result;
    result.preset = small_preset();
    result.setup = small_setup();
    Rng rng(5);
    for (int r = 0; r < n; ++r) {
        RealizationRecord rec;
        rec.index = r;
        rec.superficial.position_error = 5.0 + rng.uniform();
        rec.superficial.angle_error = 10.0 + rng.uniform();
        rec.superficial.log10_amplitude_error = -0.2 + 0.1 * rng.uniform();
        rec.superficial.relative_max = sup_rm;
        rec.superficial.detected = sup_rm > 0.1;
        rec.deep.position_error = 15.0 + rng.uniform();
        rec.deep.angle_error = 20.0 + rng.uniform();
        rec.deep.log10_amplitude_error = -0.6 + 0.1 * rng.uniform();
        rec.deep.relative_max = deep_rm;
        rec.deep.detected = deep_rm > 0.1;
        result.realizations.push_back(rec);
    }
    auto collect = [&](int roi) {
        std::vector<double> pos, ang, amp, rel;
        for (const auto& r : result.realizations) {
            const RoiMetrics& m = roi == roi_superficial ? r.superficial : r.deep;
            pos.push_back(m.position_error);
            ang.push_back(m.angle_error);
            amp.push_back(m.log10_amplitude_error);
            rel.push_back(m.relative_max);
        }
        RoiSummary s;
        s.position_error = summarize_sample(pos);
        s.angle_error = summarize_sample(ang);
        s.log10_amplitude_error = summarize_sample(amp);
        s.relative_max = summarize_sample(rel);
        return s;
    };
    result.superficial = collect(roi_superficial);
    result.deep = collect(roi_deep);
    return result;
}

} // namespace

TEST_CASE("an invisible ROI is filtered; a visible one emits all four files") {
    const CaseResult result = synthetic_result(20, 0.01, 1.0);
    const auto files = histogram_files(result, 10);
    REQUIRE(files.size() == 4);
    const char* expected[4] = {"hist_position_error_superficial.dat",
                               "hist_angle_error_superficial.dat",
                               "hist_log10_amplitude_error_superficial.dat",
                               "hist_relative_max_superficial.dat"};
    for (int i = 0; i < 4; ++i) CHECK(files[i].first == expected[i]);

    // bin counts sum to the number of realizations
    for (const auto& [name, text] : files) {
        long total = 0;
        std::istringstream in(text);
        double center;
        long count;
        int lines = 0;
        while (in >> center >> count) {
            total += count;
            ++lines;
        }
        CHECK(total == 20);
        CHECK(lines >= 1);
        CHECK(lines <= 10);
    }
}

TEST_CASE("a constant sample collapses to a single histogram line") {
    const CaseResult result = synthetic_result(8, 0.0, 0.9);
    const auto files = histogram_files(result, 10);
    REQUIRE_FALSE(files.empty());
    bool found = false;
    for (const auto& [name, text] : files) {
        if (name == "hist_relative_max_superficial.dat") {
            found = true;
            CHECK(text == "0.90000000000000002 8\n");
        }
    }
    CHECK(found);
}

TEST_CASE("the display threshold is met at exactly five percent visibility") {
    // one of twenty realizations visible: 1 >= 0.05 * 20 keeps the ROI
    CaseResult result = synthetic_result(20, 0.01, 1.0);
    for (int r = 1; r < 20; ++r) result.realizations[r].superficial.relative_max = 0.0;
    std::vector<double> rel;
    for (const auto& r : result.realizations) rel.push_back(r.superficial.relative_max);
    result.superficial.relative_max = summarize_sample(rel);
    const auto files = histogram_files(result, 10);
    CHECK(files.size() == 4);

    CHECK_THROWS_AS(histogram_files(result, 0), parameter_error);
}

} // TEST_SUITE
