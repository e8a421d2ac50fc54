#pragma once

#include "istn/geometry.hpp"
#include "istn/units.hpp"

namespace istn {

inline constexpr double kLightSpeedMps = 2.99792458e8;

enum class TerminalKind { Sue, Bs };

// Link-budget parameters shared by every satellite-terminal pair. Antenna
// gains are stored in dBi as configured and converted to linear once per
// evaluation; everything downstream of the channel model is linear SI.
struct ChannelParams {
    double carrier_frequency_hz = 27.5e9;
    double aperture_radius_m = 0.25;
    double gain_leo_dbi = 42.0;
    double gain_sue_dbi = 10.0;
    double gain_bs_dbi = 32.8;
    double noise_density_w_per_hz = dbm_per_hz_to_w_per_hz(-174.0);

    // The tapered-aperture pattern 4*(J1(u)/u)^2 (exponent 2) is continuous
    // with value 1 at boresight; exponent 1 reproduces the unsquared variant,
    // whose u->0 limit is 2.
    int beam_pattern_exponent = 2;

    double wavenumber() const { return 2.0 * M_PI * carrier_frequency_hz / kLightSpeedMps; }

    void validate() const;  // throws std::invalid_argument
};

// First-kind Bessel function of order 1. Absolute error <= 1e-10 for
// |x| <= 50 (power series below 12, Hankel asymptotic expansion above).
double bessel_j1(double x);

// First positive zero of J1; the edge of the antenna main lobe in u = k*a*sin(theta).
inline constexpr double kBesselJ1FirstZero = 3.8317059702075123;

// Normalized antenna pattern vs off-boresight angle theta in [0, pi/2].
// Exactly 1 at theta = 0.
double beam_pattern(double theta_rad, const ChannelParams& params);

// Free-space path loss (4*pi*f*d/c)^2, linear. Throws for d <= 0.
double free_space_path_loss(double distance_m, const ChannelParams& params);

// Composite linear channel gain of one satellite-terminal link:
// G_leo * G_terminal * pattern(boresight angle) / path_loss(slant range).
double channel_gain(const SatelliteState& sat, const Vec3& terminal, TerminalKind kind,
                    const ChannelParams& params);

}  // namespace istn
