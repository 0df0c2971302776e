#pragma once

#include <filesystem>

#include <Eigen/Core>

#include "ramus/geometry.hpp"

namespace ramus {

enum class Modality { eeg, meg, combined };

// m x 3K gain matrix tying 3-axis dipole sources to sensor readings.
// Column 3j+a is the response to a unit dipole at position j along axis a.
// Units are SI per unit dipole moment; downstream max-normalization makes the
// absolute scale non-binding.
struct LeadField {
    Eigen::MatrixXd matrix;
    Modality modality = Modality::eeg;
    std::string units;
    // Set when the Legendre series' last term exceeded 1e-10 of the largest
    // accumulated entry for some source (truncation warning, not an error).
    bool truncation_warning = false;

    Eigen::Index rows() const { return matrix.rows(); }
    Eigen::Index cols() const { return matrix.cols(); }
};

// Surface potential lead field for dipoles in a homogeneous conducting sphere
// with insulating exterior, truncated Legendre series with series_terms terms,
// Legendre functions without the Condon-Shortley phase, average reference
// subtracted (every column then sums to zero). Electrodes must lie on the
// sphere surface; sources strictly inside.
LeadField eeg_sphere_leadfield(const SourceSpace& space, const SensorArray& sensors,
                               double conductivity_s_per_m, double sphere_radius_mm,
                               int series_terms);

// Radially projected magnetic field of a current dipole in a spherically
// symmetric conductor: B_r(r) = -(mu0/4pi) ((q x r0) . r_hat) / |r - r0|^3.
// Secondary volume currents contribute nothing to the radial component, so
// only the primary term appears; sources with moment parallel to their
// position vector are exactly silent.
LeadField meg_radial_leadfield(const SourceSpace& space, const SensorArray& sensors);

// MEG matrix and data rescaled so the two modality blocks carry equal
// Frobenius norm, then stacked (EEG rows first, data concatenated likewise).
struct CombinedMeasurement {
    LeadField lf;
    Eigen::VectorXd data;
    double meg_scale = 0.0; // ||L_eeg||_F / ||L_meg||_F
};
CombinedMeasurement combine_emeg(const LeadField& eeg, const LeadField& meg,
                                 const Eigen::VectorXd& eeg_data,
                                 const Eigen::VectorXd& meg_data);

// Text format: header line `LEADFIELD v1 rows=<m> cols=<3K> modality=<EEG|MEG|COMBINED>`,
// then m lines of 3K space-separated floats at 17 significant digits.
// Binary variant: the same header line, then row-major 64-bit little-endian
// IEEE doubles; load_leadfield distinguishes the two by payload size.
void save_leadfield(const LeadField& lf, const std::filesystem::path& path, bool binary = false);
LeadField load_leadfield(const std::filesystem::path& path);

} // namespace ramus
