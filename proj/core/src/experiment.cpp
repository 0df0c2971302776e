#include "ramus/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>
#include <string>
#include <thread>

#include <json.hpp>

#include "ramus/errors.hpp"
#include "ramus/rng.hpp"

namespace ramus {

namespace {

constexpr double pi = 3.14159265358979323846;

Dipole make_dipole(double x_mm, double z_mm, double angle_deg, double amplitude) {
    Dipole d;
    d.position_mm = Eigen::Vector3d(x_mm, 0.0, z_mm);
    const double a = angle_deg * pi / 180.0;
    d.moment = amplitude * Eigen::Vector3d(std::cos(a), 0.0, std::sin(a));
    d.amplitude = amplitude;
    return d;
}

// Deterministic float formatting shared by every text emitter; round-trips
// doubles exactly at 17 significant digits.
std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* modality_name(Modality m) {
    switch (m) {
        case Modality::eeg: return "EEG";
        case Modality::meg: return "MEG";
        case Modality::combined: return "E/MEG";
    }
    return "?";
}

const char* family_name(HyperpriorFamily f) {
    return f == HyperpriorFamily::inverse_gamma ? "IG" : "G";
}

// NaN compares greater than every number so undefined entries collect at the
// tail and leave order statistics of the defined part intact.
bool nan_last_less(double a, double b) {
    if (std::isnan(a)) return false;
    if (std::isnan(b)) return true;
    return a < b;
}

int nearest_source(const SourceSpace& space, const Eigen::Vector3d& p) {
    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int j = 0; j < space.count(); ++j) {
        const double d2 = (space.positions.row(j).transpose() - p).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = j;
        }
    }
    return best;
}

std::vector<double> finite_only(const std::vector<double>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (double x : v)
        if (std::isfinite(x)) out.push_back(x);
    return out;
}

} // namespace

GroundTruth make_ground_truth(double superficial_amplitude, double deep_amplitude) {
    if (superficial_amplitude < 0.0 || deep_amplitude < 0.0)
        throw parameter_error("make_ground_truth: amplitudes must be >= 0");
    GroundTruth truth;
    truth.dipoles.push_back(make_dipole(-5.0, 77.0, 11.0, superficial_amplitude));
    truth.dipoles.push_back(make_dipole(7.0, 5.0, 68.0, deep_amplitude));
    truth.roi_diameter_mm = 60.0;
    return truth;
}

const std::vector<CasePreset>& case_presets() {
    static const std::vector<CasePreset> table = [] {
        std::vector<CasePreset> t;
        const auto ig = HyperpriorFamily::inverse_gamma;
        const auto g = HyperpriorFamily::gamma;
        const auto eeg = Modality::eeg;
        const auto emeg = Modality::combined;
        t.push_back({'A', eeg, 8.0, 100, ig, 10.0, 5.0, 3.0});
        t.push_back({'B', eeg, 8.0, 100, ig, 10.0, 0.0, 3.0});
        t.push_back({'C', eeg, 8.0, 100, ig, 0.0, 5.0, 3.0});
        t.push_back({'D', eeg, 8.0, 100, ig, 10.0, 7.0, 3.0});
        t.push_back({'E', eeg, 5.0, 100, ig, 10.0, 7.0, 3.0});
        t.push_back({'F', eeg, 8.0, 20, ig, 10.0, 7.0, 3.0});
        t.push_back({'G', eeg, 8.0, 100, g, 10.0, 5.0, 3.0});
        t.push_back({'H', emeg, 8.0, 100, ig, 10.0, 5.0, 3.0});
        t.push_back({'I', emeg, 8.0, 100, ig, 10.0, 7.0, 3.0});
        return t;
    }();
    return table;
}

CasePreset case_preset(char id) {
    for (const auto& p : case_presets())
        if (p.id == id) return p;
    throw parameter_error(std::string("case_preset: unknown case id '") + id + "'");
}

SimulatedData simulate_measurements(const LeadField& lf, const SourceSpace& space,
                                    const GroundTruth& truth, double noise_pct,
                                    std::uint64_t rng_seed) {
    if (noise_pct < 0.0) throw parameter_error("simulate_measurements: noise_pct must be >= 0");
    if (lf.cols() != 3 * static_cast<Eigen::Index>(space.count()))
        throw parameter_error("simulate_measurements: lead field columns != 3K");
    if (truth.dipoles.empty())
        throw parameter_error("simulate_measurements: ground truth has no dipoles");

    SimulatedData sim;
    Eigen::VectorXd clean = Eigen::VectorXd::Zero(lf.rows());
    for (const auto& d : truth.dipoles) {
        const int j = nearest_source(space, d.position_mm);
        sim.source_indices.push_back(j);
        sim.snap_distances_mm.push_back(
            (space.positions.row(j).transpose() - d.position_mm).norm());
        clean += lf.matrix.middleCols<3>(3 * j) * d.moment;
    }

    const double clean_max = clean.cwiseAbs().maxCoeff();
    if (clean_max == 0.0)
        throw degenerate_input_error("simulate_measurements: clean signal is identically zero");

    const double noise_std = (noise_pct / 100.0) * clean_max;
    Rng rng(rng_seed);
    Eigen::VectorXd noisy = clean;
    for (Eigen::Index i = 0; i < noisy.size(); ++i) noisy[i] += noise_std * rng.gaussian();

    // Division (not multiplication by the reciprocal) pins the maximizing
    // entry to exactly +-1.
    const double noisy_max = noisy.cwiseAbs().maxCoeff();
    if (noisy_max == 0.0)
        throw degenerate_input_error("simulate_measurements: noisy signal is identically zero");
    sim.data = noisy / noisy_max;
    sim.scale = 1.0 / noisy_max;
    sim.sigma_effective = noise_std / noisy_max;
    return sim;
}

RoiMetrics roi_metrics(const Reconstruction& rec, const SourceSpace& space,
                       const GroundTruth& truth, int roi_index) {
    if (roi_index < 0 || roi_index >= static_cast<int>(truth.dipoles.size()))
        throw parameter_error("roi_metrics: roi_index out of range");
    const int K = space.count();
    if (rec.x_final.size() != 3 * static_cast<Eigen::Index>(K))
        throw parameter_error("roi_metrics: reconstruction length != 3K");

    const Dipole& target = truth.dipoles[roi_index];
    const double radius = truth.roi_diameter_mm / 2.0;

    std::vector<int> members;
    for (int j = 0; j < K; ++j)
        if ((space.positions.row(j).transpose() - target.position_mm).norm() <= radius)
            members.push_back(j);
    if (members.empty())
        throw geometry_error("roi_metrics: ROI contains no source positions");

    Eigen::VectorXd amplitude(K);
    for (int j = 0; j < K; ++j) amplitude[j] = rec.x_final.segment<3>(3 * j).norm();
    const double global_max = amplitude.maxCoeff();

    double roi_max = 0.0;
    double total = 0.0;
    Eigen::Vector3d weighted_position = Eigen::Vector3d::Zero();
    Eigen::Vector3d moment_sum = Eigen::Vector3d::Zero();
    for (int j : members) {
        roi_max = std::max(roi_max, amplitude[j]);
        total += amplitude[j];
        weighted_position += amplitude[j] * space.positions.row(j).transpose();
        moment_sum += rec.x_final.segment<3>(3 * j);
    }

    RoiMetrics m;
    m.relative_max = global_max > 0.0 ? roi_max / global_max : 0.0;
    m.detected = m.relative_max > 0.1;

    if (total == 0.0) {
        m.undefined_position = true;
        m.detected = false;
        m.position_error = std::numeric_limits<double>::quiet_NaN();
        m.angle_error = std::numeric_limits<double>::quiet_NaN();
        m.log10_amplitude_error = -std::numeric_limits<double>::infinity();
        return m;
    }

    const Eigen::Vector3d com = weighted_position / total;
    m.position_error = (com - target.position_mm).norm();

    const double sum_norm = moment_sum.norm();
    const double true_norm = target.moment.norm();
    if (sum_norm > 0.0 && true_norm > 0.0) {
        const double c = std::clamp(moment_sum.dot(target.moment) / (sum_norm * true_norm),
                                    -1.0, 1.0);
        m.angle_error = std::acos(c) * 180.0 / pi;
    } else {
        m.angle_error = std::numeric_limits<double>::quiet_NaN();
    }
    m.log10_amplitude_error = std::log10(sum_norm / target.amplitude);
    return m;
}

double sample_median(std::vector<double> sample) {
    if (sample.empty()) throw parameter_error("sample_median: empty sample");
    std::sort(sample.begin(), sample.end(), nan_last_less);
    const std::size_t n = sample.size();
    if (n % 2 == 1) return sample[n / 2];
    return 0.5 * (sample[n / 2 - 1] + sample[n / 2]);
}

double sample_percentile(std::vector<double> sample, double fraction) {
    if (sample.empty()) throw parameter_error("sample_percentile: empty sample");
    if (fraction < 0.0 || fraction > 1.0)
        throw parameter_error("sample_percentile: fraction must lie in [0, 1]");
    std::sort(sample.begin(), sample.end(), nan_last_less);
    const double pos = fraction * static_cast<double>(sample.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0) return sample[lo];
    return sample[lo] + frac * (sample[lo + 1] - sample[lo]);
}

HistogramSummary summarize_sample(std::vector<double> sample) {
    HistogramSummary s;
    s.median = sample_median(sample);
    s.lower_90 = sample_percentile(sample, 0.05);
    s.upper_90 = sample_percentile(sample, 0.95);
    s.sample = std::move(sample);
    return s;
}

void ExperimentSetup::validate() const {
    if (source_count < 1) throw parameter_error("ExperimentSetup: source_count must be >= 1");
    if (!(source_radius_mm > 0.0))
        throw parameter_error("ExperimentSetup: source_radius_mm must be > 0");
    if (sensor_count < 1) throw parameter_error("ExperimentSetup: sensor_count must be >= 1");
    if (!(sensor_radius_mm > 0.0))
        throw parameter_error("ExperimentSetup: sensor_radius_mm must be > 0");
    if (!(meg_radius_factor > 0.0))
        throw parameter_error("ExperimentSetup: meg_radius_factor must be > 0");
    if (!(conductivity_s_per_m > 0.0))
        throw parameter_error("ExperimentSetup: conductivity must be > 0");
    if (!(head_radius_mm > 0.0))
        throw parameter_error("ExperimentSetup: head_radius_mm must be > 0");
    if (series_terms < 1) throw parameter_error("ExperimentSetup: series_terms must be >= 1");
    if (levels < 1) throw parameter_error("ExperimentSetup: levels must be >= 1");
    if (n_iter < 1) throw parameter_error("ExperimentSetup: n_iter must be >= 1");
    if (!(theta0 > 0.0)) throw parameter_error("ExperimentSetup: theta0 must be > 0");
    if (realizations < 1) throw parameter_error("ExperimentSetup: realizations must be >= 1");
    if (threads < 1) throw parameter_error("ExperimentSetup: threads must be >= 1");
}

namespace {

RoiSummary summarize_roi(const std::vector<RealizationRecord>& records, int roi_index) {
    std::vector<double> pos, ang, amp, rel;
    int detected = 0;
    for (const auto& r : records) {
        const RoiMetrics& m = roi_index == roi_superficial ? r.superficial : r.deep;
        pos.push_back(m.position_error);
        ang.push_back(m.angle_error);
        amp.push_back(m.log10_amplitude_error);
        rel.push_back(m.relative_max);
        if (m.detected) ++detected;
    }
    RoiSummary s;
    s.position_error = summarize_sample(std::move(pos));
    s.angle_error = summarize_sample(std::move(ang));
    s.log10_amplitude_error = summarize_sample(std::move(amp));
    s.relative_max = summarize_sample(std::move(rel));
    s.detection_rate_pct = 100.0 * detected / static_cast<double>(records.size());
    return s;
}

} // namespace

CaseResult run_case(const CasePreset& preset, const ExperimentSetup& setup,
                    const LeadField* leadfield) {
    setup.validate();
    if (!(preset.noise_pct > 0.0))
        throw parameter_error("run_case: noise_pct must be > 0 (the likelihood std tracks it)");
    if (!(preset.sparsity > 1.0)) throw parameter_error("run_case: sparsity must be > 1");
    if (preset.decompositions < 1)
        throw parameter_error("run_case: decompositions must be >= 1");

    const auto t0 = std::chrono::steady_clock::now();

    CaseResult result;
    result.preset = preset;
    result.setup = setup;

    const GroundTruth truth =
        make_ground_truth(preset.superficial_amplitude, preset.deep_amplitude);
    const SourceSpace space =
        generate_source_space(setup.source_count, setup.source_radius_mm, setup.source_seed);

    LeadField lf_used;
    if (leadfield != nullptr) {
        if (leadfield->modality != preset.modality)
            throw parameter_error("run_case: supplied lead field modality differs from preset");
        if (leadfield->cols() != 3 * static_cast<Eigen::Index>(space.count()))
            throw parameter_error("run_case: supplied lead field columns != 3K");
        lf_used = *leadfield;
        result.leadfield_truncation_warning = lf_used.truncation_warning;
    } else if (preset.modality == Modality::eeg) {
        const SensorArray electrodes = build_upper_hemisphere_sensors(
            setup.sensor_count, setup.sensor_radius_mm, SensorKind::eeg);
        lf_used = eeg_sphere_leadfield(space, electrodes, setup.conductivity_s_per_m,
                                       setup.head_radius_mm, setup.series_terms);
        result.leadfield_truncation_warning = lf_used.truncation_warning;
    } else {
        const SensorArray magnetometers = build_upper_hemisphere_sensors(
            setup.sensor_count, setup.sensor_radius_mm * setup.meg_radius_factor,
            SensorKind::meg_radial);
        const LeadField lf_meg = meg_radial_leadfield(space, magnetometers);
        if (preset.modality == Modality::meg) {
            lf_used = lf_meg;
        } else {
            const SensorArray electrodes = build_upper_hemisphere_sensors(
                setup.sensor_count, setup.sensor_radius_mm, SensorKind::eeg);
            const LeadField lf_eeg =
                eeg_sphere_leadfield(space, electrodes, setup.conductivity_s_per_m,
                                     setup.head_radius_mm, setup.series_terms);
            result.leadfield_truncation_warning = lf_eeg.truncation_warning;
            // Combining before any simulation gives the stacked system a
            // single noise floor and normalization.
            const CombinedMeasurement combined =
                combine_emeg(lf_eeg, lf_meg, Eigen::VectorXd::Zero(lf_eeg.rows()),
                             Eigen::VectorXd::Zero(lf_meg.rows()));
            lf_used = combined.lf;
        }
    }

    const Rng master(setup.master_seed);
    const int n = setup.realizations;
    result.realizations.resize(n);

    HyperpriorConfig hp;
    hp.family = preset.family;
    hp.beta = setup.beta;
    hp.theta0 = setup.theta0;
    hp.validate();

    auto run_one = [&](int r) {
        RealizationRecord rec_row;
        rec_row.index = r;
        rec_row.noise_seed = master.derive_stream(2 * static_cast<std::uint64_t>(r)).next_u64();
        rec_row.reconstruction_seed =
            master.derive_stream(2 * static_cast<std::uint64_t>(r) + 1).next_u64();

        const SimulatedData sim = simulate_measurements(lf_used, space, truth,
                                                        preset.noise_pct, rec_row.noise_seed);

        RamusConfig cfg;
        cfg.levels = setup.levels;
        cfg.sparsity = preset.sparsity;
        cfg.decompositions = preset.decompositions;
        cfg.hyperprior = hp;
        cfg.n_iter = setup.n_iter;
        cfg.sigma = sim.sigma_effective;
        cfg.rng_seed = rec_row.reconstruction_seed;

        const Reconstruction rec = ramus_reconstruct(lf_used, space, sim.data, cfg);

        // The reconstruction lives in normalized data units, so the truth is
        // carried to the same units before scoring.
        GroundTruth scaled = truth;
        for (auto& d : scaled.dipoles) {
            d.moment *= sim.scale;
            d.amplitude *= sim.scale;
        }
        rec_row.superficial = roi_metrics(rec, space, scaled, roi_superficial);
        rec_row.deep = roi_metrics(rec, space, scaled, roi_deep);

        if (r == 0) result.snap_distances_mm = sim.snap_distances_mm;
        result.realizations[r] = std::move(rec_row);
    };

    const int threads = std::min(setup.threads, n);
    if (threads <= 1) {
        for (int r = 0; r < n; ++r) run_one(r);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> failures(threads);
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (int r = t; r < n; r += threads) run_one(r);
                } catch (...) {
                    failures[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& f : failures)
            if (f) std::rethrow_exception(f);
    }

    result.superficial = summarize_roi(result.realizations, roi_superficial);
    result.deep = summarize_roi(result.realizations, roi_deep);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

std::string metrics_csv(const CaseResult& result) {
    std::ostringstream out;
    out << "case_id,roi,realization_seed,position_error,angle_error,"
           "log10_amplitude_error,relative_max,detected\n";
    for (const auto& r : result.realizations) {
        const struct {
            const char* name;
            const RoiMetrics& m;
        } rows[2] = {{"superficial", r.superficial}, {"deep", r.deep}};
        for (const auto& row : rows) {
            out << result.preset.id << ',' << row.name << ',' << r.noise_seed << ','
                << format_double(row.m.position_error) << ','
                << format_double(row.m.angle_error) << ','
                << format_double(row.m.log10_amplitude_error) << ','
                << format_double(row.m.relative_max) << ','
                << (row.m.detected ? "true" : "false") << '\n';
        }
    }
    return out.str();
}

namespace {

nlohmann::json summary_node(const HistogramSummary& s) {
    return {{"median", s.median}, {"lower_90", s.lower_90}, {"upper_90", s.upper_90}};
}

nlohmann::json roi_node(const RoiSummary& s) {
    return {{"detection_rate_pct", s.detection_rate_pct},
            {"position_error", summary_node(s.position_error)},
            {"angle_error", summary_node(s.angle_error)},
            {"log10_amplitude_error", summary_node(s.log10_amplitude_error)},
            {"relative_max", summary_node(s.relative_max)}};
}

} // namespace

std::string summary_json(const CaseResult& result) {
    nlohmann::json j;
    j["case_id"] = std::string(1, result.preset.id);
    j["modality"] = modality_name(result.preset.modality);
    j["hyperprior"] = family_name(result.preset.family);
    j["sparsity"] = result.preset.sparsity;
    j["decompositions"] = result.preset.decompositions;
    j["deep_amplitude"] = result.preset.deep_amplitude;
    j["superficial_amplitude"] = result.preset.superficial_amplitude;
    j["noise_pct"] = result.preset.noise_pct;
    j["realizations"] = static_cast<int>(result.realizations.size());
    j["source_count"] = result.setup.source_count;
    j["levels"] = result.setup.levels;
    j["n_iter"] = result.setup.n_iter;
    j["theta0"] = result.setup.theta0;
    j["beta"] = result.setup.beta;
    j["master_seed"] = result.setup.master_seed;
    j["snap_distances_mm"] = result.snap_distances_mm;
    j["leadfield_truncation_warning"] = result.leadfield_truncation_warning;
    j["wall_seconds"] = result.wall_seconds;
    j["rois"] = {{"superficial", roi_node(result.superficial)},
                 {"deep", roi_node(result.deep)}};
    return j.dump(2) + "\n";
}

namespace {

std::string histogram_text(const std::vector<double>& sample, int bins) {
    const std::vector<double> v = finite_only(sample);
    std::ostringstream out;
    if (v.empty()) return out.str();
    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    const double lo = *lo_it, hi = *hi_it;
    if (lo == hi) {
        out << format_double(lo) << ' ' << v.size() << '\n';
        return out.str();
    }
    const double width = (hi - lo) / bins;
    std::vector<long> count(bins, 0);
    for (double x : v) {
        int b = static_cast<int>((x - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        ++count[b];
    }
    for (int b = 0; b < bins; ++b)
        out << format_double(lo + (b + 0.5) * width) << ' ' << count[b] << '\n';
    return out.str();
}

} // namespace

std::vector<std::pair<std::string, std::string>> histogram_files(const CaseResult& result,
                                                                 int bins) {
    if (bins < 1) throw parameter_error("histogram_files: bins must be >= 1");
    std::vector<std::pair<std::string, std::string>> files;
    const struct {
        const char* name;
        const RoiSummary& s;
    } rois[2] = {{"superficial", result.superficial}, {"deep", result.deep}};
    const double n = static_cast<double>(result.realizations.size());
    for (const auto& roi : rois) {
        // Display filter: an ROI is plotted only when relative_max > 0.05 in
        // at least 5% of realizations. Detection stays at the 0.1 threshold.
        long visible = 0;
        for (double rm : roi.s.relative_max.sample)
            if (rm > 0.05) ++visible;
        if (static_cast<double>(visible) < 0.05 * n) continue;

        const struct {
            const char* metric;
            const HistogramSummary& h;
        } metrics[4] = {{"position_error", roi.s.position_error},
                        {"angle_error", roi.s.angle_error},
                        {"log10_amplitude_error", roi.s.log10_amplitude_error},
                        {"relative_max", roi.s.relative_max}};
        for (const auto& m : metrics) {
            std::string text = histogram_text(m.h.sample, bins);
            if (text.empty()) continue;
            files.emplace_back(std::string("hist_") + m.metric + "_" + roi.name + ".dat",
                               std::move(text));
        }
    }
    return files;
}

} // namespace ramus
