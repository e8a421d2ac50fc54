#include "istn/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace istn {

void ChannelParams::validate() const {
    if (!(carrier_frequency_hz > 0.0)) throw std::invalid_argument("carrier_frequency_hz must be > 0");
    if (!(aperture_radius_m > 0.0)) throw std::invalid_argument("aperture_radius_m must be > 0");
    if (!(noise_density_w_per_hz > 0.0)) throw std::invalid_argument("noise_density_w_per_hz must be > 0");
    if (beam_pattern_exponent != 1 && beam_pattern_exponent != 2)
        throw std::invalid_argument("beam_pattern_exponent must be 1 or 2");
}

namespace {

// Ascending series J1(x) = sum_j (-1)^j (x/2)^(2j+1) / (j! (j+1)!).
// Cancellation keeps the absolute error below ~1e-12 up to x = 12.
double j1_series(double x) {
    const double half = 0.5 * x;
    double term = half;
    double sum = term;
    for (int j = 1; j < 80; ++j) {
        term *= -(half * half) / (static_cast<double>(j) * static_cast<double>(j + 1));
        sum += term;
        if (std::fabs(term) <= 1e-18 * std::fabs(sum) + 1e-300) break;
    }
    return sum;
}

// Hankel asymptotic expansion (Abramowitz & Stegun 9.2.5/9.2.9/9.2.10),
// terms truncated at their smallest magnitude. For x >= 12 the truncation
// error is below ~1e-12.
double j1_asymptotic(double x) {
    constexpr double mu = 4.0;  // 4*nu^2 for nu = 1
    const double chi = x - 0.75 * M_PI;
    double p = 1.0;
    double q = 0.0;
    double t = 1.0;
    double prev_mag = 1.0;
    for (int j = 1; j < 60; ++j) {
        const double odd = 2.0 * j - 1.0;
        t *= (mu - odd * odd) / (static_cast<double>(j) * 8.0 * x);
        if (std::fabs(t) > prev_mag) break;  // divergent tail reached
        prev_mag = std::fabs(t);
        if (j % 2 == 1) {
            q += ((j - 1) / 2 % 2 == 0) ? t : -t;
        } else {
            p += (j / 2 % 2 == 0) ? t : -t;
        }
        if (std::fabs(t) < 1e-18) break;
    }
    return std::sqrt(2.0 / (M_PI * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j1(double x) {
    const double ax = std::fabs(x);
    double v = (ax <= 12.0) ? j1_series(ax) : j1_asymptotic(ax);
    return x < 0.0 ? -v : v;  // J1 is odd
}

double beam_pattern(double theta_rad, const ChannelParams& params) {
    if (theta_rad == 0.0) return 1.0;
    const double u = params.wavenumber() * params.aperture_radius_m * std::sin(theta_rad);
    if (u == 0.0) return 1.0;
    const double ratio = bessel_j1(u) / u;
    if (params.beam_pattern_exponent == 1) return 4.0 * std::fabs(ratio);
    return 4.0 * ratio * ratio;
}

double free_space_path_loss(double distance_m, const ChannelParams& params) {
    if (!(distance_m > 0.0)) throw std::invalid_argument("path loss requires distance > 0");
    const double v = 4.0 * M_PI * params.carrier_frequency_hz * distance_m / kLightSpeedMps;
    return v * v;
}

double channel_gain(const SatelliteState& sat, const Vec3& terminal, TerminalKind kind,
                    const ChannelParams& params) {
    const double d = slant_range(sat, terminal);
    const double theta = boresight_angle(sat, terminal);
    const double g_term =
        db_to_linear(kind == TerminalKind::Sue ? params.gain_sue_dbi : params.gain_bs_dbi);
    return db_to_linear(params.gain_leo_dbi) * g_term * beam_pattern(theta, params) /
           free_space_path_loss(d, params);
}

}  // namespace istn
