#include "ramus/leadfield.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Geometry>

#include "ramus/errors.hpp"

namespace ramus {

LeadField eeg_sphere_leadfield(const SourceSpace& space, const SensorArray& sensors,
                               double conductivity_s_per_m, double sphere_radius_mm,
                               int series_terms) {
    if (series_terms < 1) throw parameter_error("eeg_sphere_leadfield: series_terms must be >= 1");
    if (conductivity_s_per_m <= 0.0) throw parameter_error("eeg_sphere_leadfield: conductivity must be > 0");
    const int K = space.count();
    const int m = sensors.count();
    const double R = sphere_radius_mm;

    for (int i = 0; i < m; ++i) {
        const double rad = sensors.locations.row(i).norm();
        if (std::abs(rad - R) > 1e-6 * R)
            throw geometry_error("eeg_sphere_leadfield: electrode " + std::to_string(i) +
                                 " is not on the sphere surface (|r| = " + std::to_string(rad) + " mm)");
    }
    for (int j = 0; j < K; ++j) {
        if (space.positions.row(j).norm() >= R)
            throw geometry_error("eeg_sphere_leadfield: source " + std::to_string(j) +
                                 " is on or outside the sphere surface");
    }

    LeadField lf;
    lf.modality = Modality::eeg;
    lf.units = "V per unit dipole moment (SI)";
    lf.matrix.resize(m, 3 * K);

    // SI prefactor; R in meters. Positions enter only through the
    // dimensionless eccentricity f = b/R and unit direction vectors.
    const double R_m = R * 1e-3;
    const double prefactor = 1.0 / (4.0 * std::numbers::pi * conductivity_s_per_m * R_m * R_m);
    const double tail_tolerance = 1e-10;
    const int N = series_terms;

    Eigen::Matrix<double, Eigen::Dynamic, 3> electrode_dirs(m, 3);
    for (int i = 0; i < m; ++i) electrode_dirs.row(i) = sensors.locations.row(i).normalized();

    for (int j = 0; j < K; ++j) {
        const Eigen::Vector3d r0 = space.positions.row(j).transpose();
        const double b = r0.norm();
        const double f = b / R;
        // At the center the bracket reduces to e_a . r_hat for n = 1 and all
        // higher terms vanish, so any unit r0_hat gives the same potentials.
        const Eigen::Vector3d r0_hat = (b > 1e-12 * R) ? Eigen::Vector3d(r0 / b)
                                                       : Eigen::Vector3d(0.0, 0.0, 1.0);
        double block_max = 0.0;
        double block_last_term = 0.0;

        for (int i = 0; i < m; ++i) {
            const Eigen::Vector3d r_hat = electrode_dirs.row(i).transpose();
            const double c = r_hat.dot(r0_hat);
            const Eigen::Vector3d tangential = r_hat - c * r0_hat;

            // Legendre recurrences: (n+1) P_{n+1} = (2n+1) c P_n - n P_{n-1},
            // P'_{n+1} = P'_{n-1} + (2n+1) P_n. The n sum splits into a radial
            // part A = sum (2n+1) f^(n-1) P_n and a tangential part
            // B = sum ((2n+1)/n) f^(n-1) P_n'.
            double p_prev = 1.0, p = c;        // P_0, P_1
            double dp_prev = 0.0, dp = 1.0;    // P_0', P_1'
            double fpow = 1.0;                 // f^(n-1)
            double A = 0.0, B = 0.0;
            double termA = 0.0, termB = 0.0;
            for (int n = 1; n <= N; ++n) {
                const double coeff = (2.0 * n + 1.0) * fpow;
                termA = coeff * p;
                termB = coeff / n * dp;
                A += termA;
                B += termB;
                const double p_next = ((2.0 * n + 1.0) * c * p - n * p_prev) / (n + 1.0);
                const double dp_next = dp_prev + (2.0 * n + 1.0) * p;
                p_prev = p; p = p_next;
                dp_prev = dp; dp = dp_next;
                fpow *= f;
            }

            for (int a = 0; a < 3; ++a) {
                Eigen::Vector3d axis = Eigen::Vector3d::Zero();
                axis[a] = 1.0;
                const double v = prefactor * (axis.dot(r0_hat) * A + axis.dot(tangential) * B);
                lf.matrix(i, 3 * j + a) = v;
                block_max = std::max(block_max, std::abs(v));
                const double last = prefactor * (std::abs(axis.dot(r0_hat) * termA) +
                                                 std::abs(axis.dot(tangential) * termB));
                block_last_term = std::max(block_last_term, last);
            }
        }
        if (block_last_term > tail_tolerance * block_max) lf.truncation_warning = true;
    }

    // Average reference: remove each column's mean so columns sum to zero.
    lf.matrix.rowwise() -= lf.matrix.colwise().mean();
    return lf;
}

LeadField meg_radial_leadfield(const SourceSpace& space, const SensorArray& sensors) {
    const int K = space.count();
    const int m = sensors.count();

    LeadField lf;
    lf.modality = Modality::meg;
    lf.units = "T per unit dipole moment (SI)";
    lf.matrix.resize(m, 3 * K);

    constexpr double mu0_over_4pi = 1e-7;

    for (int i = 0; i < m; ++i) {
        const Eigen::Vector3d r = sensors.locations.row(i).transpose() * 1e-3;
        const Eigen::Vector3d r_hat = r.normalized();
        for (int j = 0; j < K; ++j) {
            const Eigen::Vector3d r0 = space.positions.row(j).transpose() * 1e-3;
            const double dist = (r - r0).norm();
            if (dist < 1e-9)
                throw geometry_error("meg_radial_leadfield: sensor " + std::to_string(i) +
                                     " coincides with source " + std::to_string(j));
            const double inv_d3 = 1.0 / (dist * dist * dist);
            for (int a = 0; a < 3; ++a) {
                Eigen::Vector3d axis = Eigen::Vector3d::Zero();
                axis[a] = 1.0;
                lf.matrix(i, 3 * j + a) = -mu0_over_4pi * axis.cross(r0).dot(r_hat) * inv_d3;
            }
        }
    }
    return lf;
}

CombinedMeasurement combine_emeg(const LeadField& eeg, const LeadField& meg,
                                 const Eigen::VectorXd& eeg_data,
                                 const Eigen::VectorXd& meg_data) {
    if (eeg.cols() != meg.cols())
        throw parameter_error("combine_emeg: column counts differ");
    if (eeg_data.size() != eeg.rows() || meg_data.size() != meg.rows())
        throw parameter_error("combine_emeg: data lengths do not match row counts");
    const double meg_norm = meg.matrix.norm();
    if (meg_norm == 0.0)
        throw degenerate_input_error("combine_emeg: MEG lead field has zero Frobenius norm");

    CombinedMeasurement out;
    out.meg_scale = eeg.matrix.norm() / meg_norm;
    out.lf.modality = Modality::combined;
    out.lf.units = eeg.units + " | scaled " + meg.units;
    out.lf.truncation_warning = eeg.truncation_warning || meg.truncation_warning;
    out.lf.matrix.resize(eeg.rows() + meg.rows(), eeg.cols());
    out.lf.matrix.topRows(eeg.rows()) = eeg.matrix;
    out.lf.matrix.bottomRows(meg.rows()) = out.meg_scale * meg.matrix;
    out.data.resize(eeg_data.size() + meg_data.size());
    out.data.head(eeg_data.size()) = eeg_data;
    out.data.tail(meg_data.size()) = out.meg_scale * meg_data;
    return out;
}

} // namespace ramus
