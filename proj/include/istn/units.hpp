#pragma once

#include <cmath>

namespace istn {

// Decibel conversions. All internal math is linear-scale SI; decibels appear
// only at configuration and reporting boundaries.

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double watts_to_dbw(double w) { return 10.0 * std::log10(w); }

inline double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }

// -174 dBm/Hz -> 3.981e-21 W/Hz
inline double dbm_per_hz_to_w_per_hz(double dbm) {
    return std::pow(10.0, dbm / 10.0) * 1e-3;
}

}  // namespace istn
