#include "ramus/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ramus/errors.hpp"
#include "ramus/rng.hpp"

namespace ramus {

SourceSpace generate_source_space(int count, double max_radius_mm, std::uint64_t rng_seed) {
    if (count < 1) throw parameter_error("generate_source_space: count must be >= 1, got " + std::to_string(count));
    if (max_radius_mm <= 0.0) throw parameter_error("generate_source_space: max_radius must be > 0");

    Rng rng(rng_seed);
    SourceSpace space;
    space.max_radius = max_radius_mm;
    space.positions.resize(count, 3);
    for (int i = 0; i < count; ++i) {
        // Rejection sampling from the enclosing cube; acceptance ratio pi/6.
        double x, y, z;
        do {
            x = 2.0 * rng.uniform() - 1.0;
            y = 2.0 * rng.uniform() - 1.0;
            z = 2.0 * rng.uniform() - 1.0;
        } while (x * x + y * y + z * z > 1.0);
        space.positions.row(i) << x * max_radius_mm, y * max_radius_mm, z * max_radius_mm;
    }
    return space;
}

SensorArray build_upper_hemisphere_sensors(int count, double radius_mm, SensorKind kind) {
    if (count < 1) throw parameter_error("build_upper_hemisphere_sensors: count must be >= 1");
    if (radius_mm <= 0.0) throw parameter_error("build_upper_hemisphere_sensors: radius must be > 0");

    constexpr double golden = 0.6180339887498949; // 1/phi, azimuthal increment fraction
    SensorArray sensors;
    sensors.kind = kind;
    sensors.locations.resize(count, 3);
    for (int i = 0; i < count; ++i) {
        // z descends from the pole toward (but never onto) the equator so the
        // lattice covers z >= 0 only; i = 0 is exactly the pole.
        const double z = 1.0 - static_cast<double>(i) / count;
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = 2.0 * std::numbers::pi * golden * i;
        sensors.locations.row(i) << radius_mm * rho * std::cos(phi),
                                    radius_mm * rho * std::sin(phi),
                                    radius_mm * z;
    }
    return sensors;
}

} // namespace ramus
