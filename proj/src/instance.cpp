#include "istn/instance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "istn/detail/json_io.hpp"
#include "istn/rng.hpp"
#include "istn/units.hpp"

namespace istn {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << name << " must be positive and finite, got " << v;
        throw std::invalid_argument(msg.str());
    }
}

void check_positive_matrix(const Eigen::MatrixXd& m, const char* name) {
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            if (!(m(r, c) > 0.0) || !std::isfinite(m(r, c))) {
                std::ostringstream msg;
                msg << name << "(" << r << "," << c
                    << ") must be positive and finite, got " << m(r, c);
                throw std::invalid_argument(msg.str());
            }
        }
    }
}

void check_positive_vector(const Eigen::VectorXd& v, int expect,
                           const char* name) {
    if (v.size() != expect) {
        std::ostringstream msg;
        msg << name << " has length " << v.size() << ", expected " << expect;
        throw std::invalid_argument(msg.str());
    }
    for (int i = 0; i < v.size(); ++i) {
        if (!(v(i) > 0.0) || !std::isfinite(v(i))) {
            std::ostringstream msg;
            msg << name << "(" << i << ") must be positive and finite, got "
                << v(i);
            throw std::invalid_argument(msg.str());
        }
    }
}

}  // namespace

void ProblemInstance::validate() const {
    if (num_satellites < 1) {
        throw std::invalid_argument("num_satellites must be >= 1");
    }
    if (num_sues < 0 || num_bs < 0 || num_sues + num_bs < 1) {
        throw std::invalid_argument("need at least one terminal");
    }
    if (gain_sue.rows() != num_satellites || gain_sue.cols() != num_sues) {
        throw std::invalid_argument("gain_sue shape mismatch");
    }
    if (gain_bs.rows() != num_satellites || gain_bs.cols() != num_bs) {
        throw std::invalid_argument("gain_bs shape mismatch");
    }
    check_positive_matrix(gain_sue, "gain_sue");
    check_positive_matrix(gain_bs, "gain_bs");
    check_positive_vector(demand_sue, num_sues, "demand_sue");
    check_positive_vector(demand_bs, num_bs, "demand_bs");
    check_positive_vector(p_max_sue, num_sues, "p_max_sue");
    check_positive_vector(p_max_bs, num_bs, "p_max_bs");
    check_positive_vector(bandwidth_leo, num_satellites, "W_leo");
    check_positive_vector(noise_density, num_satellites, "noise_density");
    if (static_cast<int>(ue_counts.size()) != num_bs) {
        throw std::invalid_argument("ue_counts length mismatch");
    }
    for (int n = 0; n < num_bs; ++n) {
        if (ue_counts[n] < 1) {
            std::ostringstream msg;
            msg << "ue_counts(" << n << ") must be >= 1, got " << ue_counts[n];
            throw std::invalid_argument(msg.str());
        }
    }
}

void ScenarioConfig::validate() const {
    require_positive(area_side_m, "area_side_m");
    center.validate();
    if (num_satellites < 1) {
        throw std::invalid_argument("num_satellites must be >= 1");
    }
    if (num_sues < 0 || num_bs < 0 || num_sues + num_bs < 1) {
        throw std::invalid_argument("need at least one terminal");
    }
    require_positive(mean_ues_per_bs, "mean_ues_per_bs");
    require_positive(demand_per_user_bps, "demand_per_user_bps");
    require_positive(sat_altitude_m, "sat_altitude_m");
    require_positive(lat_spacing_deg, "lat_spacing_deg");
    channel.validate();
    require_positive(dbw_to_watts(p_max_sue_dbw), "p_max_sue");
    require_positive(dbw_to_watts(p_max_bs_dbw), "p_max_bs");
    require_positive(bandwidth_leo_hz, "bandwidth_leo_hz");
    if (!bandwidth_leo_override_hz.empty()) {
        if (static_cast<int>(bandwidth_leo_override_hz.size()) !=
            num_satellites) {
            throw std::invalid_argument(
                "bandwidth_leo_override_hz length must equal num_satellites");
        }
        for (double w : bandwidth_leo_override_hz) {
            require_positive(w, "bandwidth_leo_override_hz");
        }
    }
}

ProblemInstance generate_scenario(const ScenarioConfig& config) {
    config.validate();
    Rng rng(config.rng_seed);

    const auto sats = place_constellation(config.center, config.num_satellites,
                                          config.lat_spacing_deg,
                                          config.sat_altitude_m);

    // Draw order is part of the determinism contract: SUE (east, north)
    // offsets first, then BS offsets, then per-cell UE counts.
    const double half = config.area_side_m / 2.0;
    const double lat_rad = config.center.latitude_deg * M_PI / 180.0;
    const double deg_per_m_north = 180.0 / (M_PI * kEarthRadiusM);
    const double deg_per_m_east =
        180.0 / (M_PI * kEarthRadiusM * std::cos(lat_rad));

    auto draw_position = [&]() {
        const double east = rng.uniform(-half, half);
        const double north = rng.uniform(-half, half);
        GeodeticPoint p = config.center;
        p.latitude_deg += north * deg_per_m_north;
        p.longitude_deg += east * deg_per_m_east;
        p.altitude_m = 0.0;
        return geodetic_to_cartesian(p);
    };

    std::vector<Vec3> sue_pos(config.num_sues);
    for (auto& p : sue_pos) p = draw_position();
    std::vector<Vec3> bs_pos(config.num_bs);
    for (auto& p : bs_pos) p = draw_position();

    ProblemInstance inst;
    inst.num_satellites = config.num_satellites;
    inst.num_bs = config.num_bs;
    inst.num_sues = config.num_sues;
    inst.seed = config.rng_seed;

    inst.ue_counts.resize(config.num_bs);
    for (auto& count : inst.ue_counts) {
        count = rng.poisson_positive(config.mean_ues_per_bs);
    }

    const double ka = config.channel.wavenumber() *
                      config.channel.aperture_radius_m;
    auto check_coverage = [&](const Vec3& pos, const char* kind, int index) {
        for (const auto& sat : sats) {
            const double u = ka * std::sin(boresight_angle(sat, pos));
            if (u < kBesselJ1FirstZero) return;
        }
        std::ostringstream msg;
        msg << kind << " " << index
            << " lies outside every satellite's main lobe; "
               "shrink area_side_m or widen the beam";
        throw std::runtime_error(msg.str());
    };

    inst.gain_sue.resize(config.num_satellites, config.num_sues);
    for (int k = 0; k < config.num_sues; ++k) {
        check_coverage(sue_pos[k], "SUE", k);
        for (int m = 0; m < config.num_satellites; ++m) {
            inst.gain_sue(m, k) = channel_gain(sats[m], sue_pos[k],
                                               TerminalKind::Sue,
                                               config.channel);
        }
    }
    inst.gain_bs.resize(config.num_satellites, config.num_bs);
    for (int n = 0; n < config.num_bs; ++n) {
        check_coverage(bs_pos[n], "BS", n);
        for (int m = 0; m < config.num_satellites; ++m) {
            inst.gain_bs(m, n) = channel_gain(sats[m], bs_pos[n],
                                              TerminalKind::Bs,
                                              config.channel);
        }
    }

    inst.demand_sue =
        Eigen::VectorXd::Constant(config.num_sues, config.demand_per_user_bps);
    inst.demand_bs.resize(config.num_bs);
    for (int n = 0; n < config.num_bs; ++n) {
        // A cell's offload demand is the exact sum of its UEs' demands.
        inst.demand_bs(n) = inst.ue_counts[n] * config.demand_per_user_bps;
    }

    inst.p_max_sue = Eigen::VectorXd::Constant(
        config.num_sues, dbw_to_watts(config.p_max_sue_dbw));
    inst.p_max_bs = Eigen::VectorXd::Constant(
        config.num_bs, dbw_to_watts(config.p_max_bs_dbw));

    inst.bandwidth_leo.resize(config.num_satellites);
    for (int m = 0; m < config.num_satellites; ++m) {
        inst.bandwidth_leo(m) = config.bandwidth_leo_override_hz.empty()
                                    ? config.bandwidth_leo_hz
                                    : config.bandwidth_leo_override_hz[m];
    }
    inst.noise_density = Eigen::VectorXd::Constant(
        config.num_satellites, config.channel.noise_density_w_per_hz);

    inst.validate();
    return inst;
}

namespace detail {

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::VectorXd vector_from_json(const json& j, const char* name,
                                 const char* what) {
    if (!j.is_array()) {
        throw std::runtime_error(std::string(what) + ": field '" + name +
                                 "' must be an array");
    }
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            throw std::runtime_error(std::string(what) + ": field '" + name +
                                     "' has a non-numeric entry");
        }
        v(static_cast<int>(i)) = j[i].get<double>();
    }
    return v;
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* name,
                                 const char* what) {
    if (!j.is_array()) {
        throw std::runtime_error(std::string(what) + ": field '" + name +
                                 "' must be an array of rows");
    }
    const int rows = static_cast<int>(j.size());
    int cols = -1;
    Eigen::MatrixXd m;
    for (int r = 0; r < rows; ++r) {
        const json& row = j[r];
        if (!row.is_array()) {
            throw std::runtime_error(std::string(what) + ": field '" + name +
                                     "' row " + std::to_string(r) +
                                     " is not an array");
        }
        if (cols < 0) {
            cols = static_cast<int>(row.size());
            m.resize(rows, cols);
        } else if (static_cast<int>(row.size()) != cols) {
            throw std::runtime_error(std::string(what) + ": field '" + name +
                                     "' has ragged rows");
        }
        for (int c = 0; c < cols; ++c) {
            if (!row[c].is_number()) {
                throw std::runtime_error(std::string(what) + ": field '" +
                                         name + "' has a non-numeric entry");
            }
            m(r, c) = row[c].get<double>();
        }
    }
    if (cols < 0) m.resize(0, 0);
    return m;
}

constexpr char kInstanceWhat[] = "instance file";
constexpr char kConfigWhat[] = "config file";

}  // namespace

const json& require_field(const json& j, const char* name, const char* what) {
    auto it = j.find(name);
    if (it == j.end()) {
        throw std::runtime_error(std::string(what) + ": missing field '" +
                                 name + "'");
    }
    return *it;
}

json instance_to_json(const ProblemInstance& inst) {
    json j;
    j["format"] = "istn-instance";
    j["version"] = 1;
    j["units"] = {{"gain_sue", "linear power gain"},
                  {"gain_bs", "linear power gain"},
                  {"demand_sue", "bit/s"},
                  {"demand_bs", "bit/s"},
                  {"p_max_sue", "W"},
                  {"p_max_bs", "W"},
                  {"W_leo", "Hz"},
                  {"noise_density", "W/Hz"}};
    j["num_satellites"] = inst.num_satellites;
    j["num_bs"] = inst.num_bs;
    j["num_sues"] = inst.num_sues;
    j["gain_sue"] = matrix_to_json(inst.gain_sue);
    j["gain_bs"] = matrix_to_json(inst.gain_bs);
    j["demand_sue"] = vector_to_json(inst.demand_sue);
    j["demand_bs"] = vector_to_json(inst.demand_bs);
    j["p_max_sue"] = vector_to_json(inst.p_max_sue);
    j["p_max_bs"] = vector_to_json(inst.p_max_bs);
    j["W_leo"] = vector_to_json(inst.bandwidth_leo);
    j["noise_density"] = vector_to_json(inst.noise_density);
    j["ue_counts"] = inst.ue_counts;
    j["seed"] = inst.seed;
    return j;
}

ProblemInstance instance_from_json(const json& j) {
    const char* what = kInstanceWhat;
    ProblemInstance inst;
    inst.num_satellites = require_field(j, "num_satellites", what).get<int>();
    inst.num_bs = require_field(j, "num_bs", what).get<int>();
    inst.num_sues = require_field(j, "num_sues", what).get<int>();
    inst.gain_sue =
        matrix_from_json(require_field(j, "gain_sue", what), "gain_sue", what);
    inst.gain_bs =
        matrix_from_json(require_field(j, "gain_bs", what), "gain_bs", what);
    inst.demand_sue = vector_from_json(require_field(j, "demand_sue", what),
                                       "demand_sue", what);
    inst.demand_bs = vector_from_json(require_field(j, "demand_bs", what),
                                      "demand_bs", what);
    inst.p_max_sue = vector_from_json(require_field(j, "p_max_sue", what),
                                      "p_max_sue", what);
    inst.p_max_bs =
        vector_from_json(require_field(j, "p_max_bs", what), "p_max_bs", what);
    inst.bandwidth_leo =
        vector_from_json(require_field(j, "W_leo", what), "W_leo", what);
    inst.noise_density = vector_from_json(
        require_field(j, "noise_density", what), "noise_density", what);
    inst.ue_counts =
        require_field(j, "ue_counts", what).get<std::vector<int>>();
    inst.seed = j.value("seed", std::uint64_t{0});
    // Zero-terminal edge: an absent dimension loses its column count in JSON.
    if (inst.num_sues == 0) inst.gain_sue.resize(inst.num_satellites, 0);
    if (inst.num_bs == 0) inst.gain_bs.resize(inst.num_satellites, 0);
    try {
        inst.validate();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string(what) + ": " + e.what());
    }
    return inst;
}

json config_to_json(const ScenarioConfig& config) {
    json j;
    j["format"] = "istn-config";
    j["version"] = 1;
    j["area_side_m"] = config.area_side_m;
    j["center"] = {{"latitude_deg", config.center.latitude_deg},
                   {"longitude_deg", config.center.longitude_deg},
                   {"altitude_m", config.center.altitude_m}};
    j["num_satellites"] = config.num_satellites;
    j["num_bs"] = config.num_bs;
    j["num_sues"] = config.num_sues;
    j["mean_ues_per_bs"] = config.mean_ues_per_bs;
    j["demand_per_user_bps"] = config.demand_per_user_bps;
    j["sat_altitude_m"] = config.sat_altitude_m;
    j["lat_spacing_deg"] = config.lat_spacing_deg;
    j["channel"] = {
        {"carrier_frequency_hz", config.channel.carrier_frequency_hz},
        {"aperture_radius_m", config.channel.aperture_radius_m},
        {"gain_leo_dbi", config.channel.gain_leo_dbi},
        {"gain_sue_dbi", config.channel.gain_sue_dbi},
        {"gain_bs_dbi", config.channel.gain_bs_dbi},
        {"noise_density_w_per_hz", config.channel.noise_density_w_per_hz},
        {"beam_pattern_exponent", config.channel.beam_pattern_exponent}};
    j["p_max_sue_dbw"] = config.p_max_sue_dbw;
    j["p_max_bs_dbw"] = config.p_max_bs_dbw;
    j["bandwidth_leo_hz"] = config.bandwidth_leo_hz;
    j["bandwidth_leo_override_hz"] = config.bandwidth_leo_override_hz;
    j["rng_seed"] = config.rng_seed;
    return j;
}

ScenarioConfig config_from_json(const json& j) {
    const char* what = kConfigWhat;
    ScenarioConfig config;  // every field optional; defaults fill the gaps
    config.area_side_m = j.value("area_side_m", config.area_side_m);
    if (j.contains("center")) {
        const json& c = j["center"];
        config.center.latitude_deg =
            c.value("latitude_deg", config.center.latitude_deg);
        config.center.longitude_deg =
            c.value("longitude_deg", config.center.longitude_deg);
        config.center.altitude_m =
            c.value("altitude_m", config.center.altitude_m);
    }
    config.num_satellites = j.value("num_satellites", config.num_satellites);
    config.num_bs = j.value("num_bs", config.num_bs);
    config.num_sues = j.value("num_sues", config.num_sues);
    config.mean_ues_per_bs =
        j.value("mean_ues_per_bs", config.mean_ues_per_bs);
    config.demand_per_user_bps =
        j.value("demand_per_user_bps", config.demand_per_user_bps);
    config.sat_altitude_m = j.value("sat_altitude_m", config.sat_altitude_m);
    config.lat_spacing_deg =
        j.value("lat_spacing_deg", config.lat_spacing_deg);
    if (j.contains("channel")) {
        const json& c = j["channel"];
        ChannelParams& ch = config.channel;
        ch.carrier_frequency_hz =
            c.value("carrier_frequency_hz", ch.carrier_frequency_hz);
        ch.aperture_radius_m =
            c.value("aperture_radius_m", ch.aperture_radius_m);
        ch.gain_leo_dbi = c.value("gain_leo_dbi", ch.gain_leo_dbi);
        ch.gain_sue_dbi = c.value("gain_sue_dbi", ch.gain_sue_dbi);
        ch.gain_bs_dbi = c.value("gain_bs_dbi", ch.gain_bs_dbi);
        ch.noise_density_w_per_hz =
            c.value("noise_density_w_per_hz", ch.noise_density_w_per_hz);
        ch.beam_pattern_exponent =
            c.value("beam_pattern_exponent", ch.beam_pattern_exponent);
    }
    config.p_max_sue_dbw = j.value("p_max_sue_dbw", config.p_max_sue_dbw);
    config.p_max_bs_dbw = j.value("p_max_bs_dbw", config.p_max_bs_dbw);
    config.bandwidth_leo_hz =
        j.value("bandwidth_leo_hz", config.bandwidth_leo_hz);
    if (j.contains("bandwidth_leo_override_hz")) {
        config.bandwidth_leo_override_hz =
            j["bandwidth_leo_override_hz"].get<std::vector<double>>();
    }
    config.rng_seed = j.value("rng_seed", config.rng_seed);
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string(what) + ": " + e.what());
    }
    return config;
}

json read_json_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(std::string(what) + ": cannot open '" + path +
                                 "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string(what) + ": parse error in '" +
                                 path + "': " + e.what());
    }
    return j;
}

void write_json_file(const json& j, const std::string& path,
                     const char* what) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error(std::string(what) +
                                 ": cannot open for writing '" + path + "'");
    }
    out << j.dump(2) << "\n";
    if (!out) {
        throw std::runtime_error(std::string(what) + ": write failed for '" +
                                 path + "'");
    }
}

}  // namespace detail

void save_instance(const ProblemInstance& inst, const std::string& path) {
    detail::write_json_file(detail::instance_to_json(inst), path,
                            "instance file");
}

ProblemInstance load_instance(const std::string& path) {
    return detail::instance_from_json(
        detail::read_json_file(path, "instance file"));
}

void save_config(const ScenarioConfig& config, const std::string& path) {
    detail::write_json_file(detail::config_to_json(config), path,
                            "config file");
}

ScenarioConfig load_config(const std::string& path) {
    return detail::config_from_json(
        detail::read_json_file(path, "config file"));
}

}  // namespace istn
