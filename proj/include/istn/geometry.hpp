#pragma once

#include <vector>

namespace istn {

// Spherical-Earth radius used throughout. Ellipsoidal precision is irrelevant
// at the fidelity of this link model.
inline constexpr double kEarthRadiusM = 6371000.0;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const;
    Vec3 normalized() const;
};

struct GeodeticPoint {
    double latitude_deg = 0.0;   // [-90, 90]
    double longitude_deg = 0.0;  // [-180, 180]
    double altitude_m = 0.0;     // >= 0

    void validate() const;  // throws std::invalid_argument
};

struct SatelliteState {
    Vec3 position;         // Earth-centered, meters
    Vec3 nadir_direction;  // unit vector toward Earth center
    int id = 0;
};

// Spherical-Earth geodetic -> Earth-centered Cartesian. Norm of the result is
// earth_radius + altitude.
Vec3 geodetic_to_cartesian(const GeodeticPoint& p, double earth_radius_m = kEarthRadiusM);

// Places `count` satellites on the center's meridian, latitudes
// center +/- i * lat_spacing, centered so that odd counts put one satellite
// exactly over `center`. Boresight points at nadir. Static snapshot; no orbit
// propagation.
std::vector<SatelliteState> place_constellation(const GeodeticPoint& center, int count,
                                                double lat_spacing_deg, double sat_altitude_m,
                                                double earth_radius_m = kEarthRadiusM);

// Euclidean distance satellite -> terminal, meters.
double slant_range(const SatelliteState& sat, const Vec3& terminal);

// Angle in [0, pi] between the satellite boresight (nadir) and the line of
// sight to the terminal. Throws if terminal coincides with the satellite.
double boresight_angle(const SatelliteState& sat, const Vec3& terminal);

}  // namespace istn
