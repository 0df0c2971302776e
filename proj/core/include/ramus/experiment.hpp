#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ramus/geometry.hpp"
#include "ramus/hyperprior.hpp"
#include "ramus/leadfield.hpp"
#include "ramus/ramus.hpp"

namespace ramus {

// A single current dipole; moment lies in the x-z plane for the built-in
// protocol sources and its norm equals the configured amplitude.
struct Dipole {
    Eigen::Vector3d position_mm = Eigen::Vector3d::Zero();
    Eigen::Vector3d moment = Eigen::Vector3d::Zero();
    double amplitude = 0.0;
};

// ROI centers coincide with the dipole positions; index 0 is the superficial
// source, index 1 the deep one.
struct GroundTruth {
    std::vector<Dipole> dipoles;
    double roi_diameter_mm = 60.0;
};

inline constexpr int roi_superficial = 0;
inline constexpr int roi_deep = 1;

// Superficial dipole at (-5, 0, 77) mm rotated 11 degrees from +x in the x-z
// plane; deep dipole at (7, 0, 5) mm rotated 68 degrees. Unit direction
// (cos a, 0, sin a) scaled by the given amplitude; amplitude 0 yields a zero
// moment, removing that dipole's contribution from any simulated signal.
GroundTruth make_ground_truth(double superficial_amplitude, double deep_amplitude);

// One row of the benchmark case matrix. id 'A'..'I'; amplitudes are
// dimensionless (only their ratio survives data normalization).
struct CasePreset {
    char id = 'A';
    Modality modality = Modality::eeg;
    double sparsity = 8.0;
    int decompositions = 100;
    HyperpriorFamily family = HyperpriorFamily::inverse_gamma;
    double deep_amplitude = 10.0;
    double superficial_amplitude = 5.0;
    double noise_pct = 3.0;
};

// The full benchmark table, ids 'A' through 'I', in order.
const std::vector<CasePreset>& case_presets();

// Lookup by id; unknown id throws parameter_error.
CasePreset case_preset(char id);

// Synthetic measurement of a ground-truth configuration. `data` has max-abs
// entry exactly 1; `scale` is the factor that produced it, and
// sigma_effective = (noise_pct/100) * max|clean| * scale is the matching
// likelihood standard deviation in normalized data units. Reconstructions of
// `data` live in truth units multiplied by `scale`.
struct SimulatedData {
    Eigen::VectorXd data;
    double scale = 0.0;
    double sigma_effective = 0.0;
    std::vector<int> source_indices;        // nearest source per dipole
    std::vector<double> snap_distances_mm;  // dipole-to-source snap distance
};

// Each dipole snaps to its nearest source position (moment decomposed on the
// Cartesian axes), clean = lf * snapped truth, noise std =
// (noise_pct/100) * max|clean|. All-zero clean signal throws
// degenerate_input_error; noise_pct must be >= 0.
SimulatedData simulate_measurements(const LeadField& lf, const SourceSpace& space,
                                    const GroundTruth& truth, double noise_pct,
                                    std::uint64_t rng_seed);

// ROI accuracy of a reconstruction, evaluated in the 30 mm-radius ball around
// the true dipole position. detected <=> relative_max > 0.1. When the total
// ROI amplitude is zero the position/angle are undefined (NaN) and
// undefined_position is set.
struct RoiMetrics {
    double position_error = 0.0;        // mm, COM vs true position
    double angle_error = 0.0;           // degrees, ROI moment sum vs true moment
    double log10_amplitude_error = 0.0; // log10(|ROI moment sum| / true amplitude)
    double relative_max = 0.0;          // ROI max amplitude / global max
    bool detected = false;
    bool undefined_position = false;
};

// Compares rec.x_final against truth.dipoles[roi_index]. The reconstruction
// is in scaled data units, so pass a truth whose moments carry the same scale
// when absolute amplitude errors matter. Empty ROI throws geometry_error.
RoiMetrics roi_metrics(const Reconstruction& rec, const SourceSpace& space,
                       const GroundTruth& truth, int roi_index);

// Sample statistics used for the result histograms. lower/upper bound the
// central 90% (5th and 95th percentile, linear interpolation between order
// statistics). NaN entries sort last and are therefore ignored by the median
// whenever fewer than half the entries are NaN.
struct HistogramSummary {
    std::vector<double> sample;
    double median = 0.0;
    double lower_90 = 0.0;
    double upper_90 = 0.0;
};

double sample_median(std::vector<double> sample);
double sample_percentile(std::vector<double> sample, double fraction);
HistogramSummary summarize_sample(std::vector<double> sample);

// Everything about a run that is not a property of the case row itself:
// discretization, forward model, solver constants, realization count, seeds.
struct ExperimentSetup {
    int source_count = 10000;
    double source_radius_mm = 87.0;
    std::uint64_t source_seed = 42;
    int sensor_count = 102;
    double sensor_radius_mm = 100.0;   // electrodes, on the conductor surface
    double meg_radius_factor = 1.2;    // magnetometers, co-located angularly
    double conductivity_s_per_m = 0.33;
    double head_radius_mm = 100.0;
    int series_terms = 100;
    int levels = 3;
    int n_iter = 10;
    double theta0 = 1e-10;
    double beta = 1.5;
    int realizations = 50;
    std::uint64_t master_seed = 1;
    int threads = 1;

    void validate() const;
};

struct RealizationRecord {
    int index = 0;
    std::uint64_t noise_seed = 0;
    std::uint64_t reconstruction_seed = 0;
    RoiMetrics superficial;
    RoiMetrics deep;
};

struct RoiSummary {
    HistogramSummary position_error;
    HistogramSummary angle_error;
    HistogramSummary log10_amplitude_error;
    HistogramSummary relative_max;
    double detection_rate_pct = 0.0;
};

struct CaseResult {
    CasePreset preset;
    ExperimentSetup setup;
    std::vector<RealizationRecord> realizations;
    RoiSummary superficial;
    RoiSummary deep;
    std::vector<double> snap_distances_mm; // per dipole, fixed across realizations
    bool leadfield_truncation_warning = false;
    double wall_seconds = 0.0;
};

// Full Monte-Carlo protocol: build geometry and lead field (E/MEG presets
// stack the Frobenius-matched MEG block under the EEG block before any data
// is simulated, so one noise floor covers both modalities), then per
// realization simulate, reconstruct, and score both ROIs. Realization r uses
// noise seed derive(2r) and reconstruction seed derive(2r+1) from the master
// seed, so results are independent of the thread count; aggregation is
// ordered by realization index. A non-null `leadfield` replaces the built-in
// forward model; its modality must match the preset and its columns the
// generated source space.
CaseResult run_case(const CasePreset& preset, const ExperimentSetup& setup,
                    const LeadField* leadfield = nullptr);

// One row per realization per ROI. Column names are fixed; the roi column
// distinguishes the two rows of a realization (values: superficial, deep).
// Rerunning the same configuration reproduces the text byte for byte.
std::string metrics_csv(const CaseResult& result);

// Medians, 90% intervals, and detection rates per ROI, plus the run context.
std::string summary_json(const CaseResult& result);

// (filename, content) pairs named hist_<metric>_<roi>.dat, two columns per
// line: bin center, count. An ROI's files are emitted only when at least 5%
// of realizations reach relative_max > 0.05 there; that threshold filters
// display output only and is distinct from the 0.1 detection criterion.
std::vector<std::pair<std::string, std::string>> histogram_files(const CaseResult& result,
                                                                 int bins = 20);

} // namespace ramus
