#include "istn/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace istn {

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Vec3 Vec3::normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero-length vector");
    return {x / n, y / n, z / n};
}

void GeodeticPoint::validate() const {
    if (!(latitude_deg >= -90.0 && latitude_deg <= 90.0))
        throw std::invalid_argument("latitude out of [-90, 90]: " + std::to_string(latitude_deg));
    if (!(longitude_deg >= -180.0 && longitude_deg <= 180.0))
        throw std::invalid_argument("longitude out of [-180, 180]: " + std::to_string(longitude_deg));
    if (!(altitude_m >= 0.0) || !std::isfinite(altitude_m))
        throw std::invalid_argument("altitude must be finite and >= 0");
}

Vec3 geodetic_to_cartesian(const GeodeticPoint& p, double earth_radius_m) {
    p.validate();
    const double lat = p.latitude_deg * M_PI / 180.0;
    const double lon = p.longitude_deg * M_PI / 180.0;
    const double r = earth_radius_m + p.altitude_m;
    return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon),
            r * std::sin(lat)};
}

std::vector<SatelliteState> place_constellation(const GeodeticPoint& center, int count,
                                                double lat_spacing_deg, double sat_altitude_m,
                                                double earth_radius_m) {
    if (count <= 0) throw std::invalid_argument("constellation count must be >= 1");
    center.validate();

    std::vector<SatelliteState> sats;
    sats.reserve(static_cast<size_t>(count));
    const double mid = 0.5 * static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i) {
        GeodeticPoint gp{center.latitude_deg + (static_cast<double>(i) - mid) * lat_spacing_deg,
                         center.longitude_deg, sat_altitude_m};
        SatelliteState s;
        s.position = geodetic_to_cartesian(gp, earth_radius_m);
        s.nadir_direction = (s.position * -1.0).normalized();
        s.id = i;
        sats.push_back(s);
    }
    return sats;
}

double slant_range(const SatelliteState& sat, const Vec3& terminal) {
    return (sat.position - terminal).norm();
}

double boresight_angle(const SatelliteState& sat, const Vec3& terminal) {
    const Vec3 los = terminal - sat.position;
    const double n = los.norm();
    if (n == 0.0) throw std::invalid_argument("terminal coincides with satellite position");
    double c = sat.nadir_direction.dot(los) / n;
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return std::acos(c);
}

}  // namespace istn
