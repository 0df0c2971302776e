#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace ramus {

// K source positions (rows, millimeters, head-centered) inside a ball.
// The unknown vector dimension downstream is exactly 3K: three Cartesian-axis
// sources per position, column index 3j+a for position j, axis a.
struct SourceSpace {
    Eigen::Matrix<double, Eigen::Dynamic, 3> positions;
    double max_radius = 0.0; // millimeters

    int count() const { return static_cast<int>(positions.rows()); }
};

enum class SensorKind { eeg, meg_radial };

// m sensor locations (rows, millimeters); EEG arrays use the average
// reference convention applied by the lead-field assembly.
struct SensorArray {
    SensorKind kind = SensorKind::eeg;
    Eigen::Matrix<double, Eigen::Dynamic, 3> locations;

    int count() const { return static_cast<int>(locations.rows()); }
};

// count points uniformly distributed in the ball of the given radius,
// deterministic for a fixed seed (rejection sampling from the cube).
SourceSpace generate_source_space(int count, double max_radius_mm, std::uint64_t rng_seed);

// Deterministic quasi-uniform layout: Fibonacci lattice restricted to the
// upper hemisphere (z >= 0), scaled to the given radius. count = 1 places the
// single sensor at the pole.
SensorArray build_upper_hemisphere_sensors(int count, double radius_mm, SensorKind kind);

} // namespace ramus
