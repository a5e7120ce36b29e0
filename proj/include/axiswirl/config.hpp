#pragma once

// Flat `key = value` run configuration. Unknown keys are rejected with the
// nearest known key suggested; every key has a documented default, so an
// empty file is a valid config.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "axiswirl/initial_data.hpp"

namespace axiswirl {

struct RunConfig {
    // grid
    int grid_nr = 64;
    int grid_nz = 64;
    double grid_r_max = 8.0;
    double grid_z_max = 4.0;
    // time
    double time_T = 0.5;
    int time_nodes = 24;
    // data
    double data_r0 = 2.2;
    double data_z0 = 0.0;
    double data_width = 0.65;
    double data_amp_omega = 2.0;
    double data_amp_swirl = 0.5;
    SwirlProfile data_swirl_profile = SwirlProfile::Gaussian;
    // solver
    double solver_picard_tol = 1e-9;
    int solver_picard_max_iters = 20;
    int solver_oracle_steps = 512;
    int solver_quad_segments = 12;
    // quadrature
    double quad_tol = 1e-12;
    // smallness
    double smallness_c0 = 1e-2;
    double smallness_p0 = 1.04;
    double smallness_A = 1.0;
    double smallness_t0 = 0.25;
    // experiment tag
    std::string experiment = "solve-local";

    HalfPlaneGrid make_grid() const { return build_grid(grid_nr, grid_nz, grid_r_max, grid_z_max); }
    DataSpec make_data_spec() const {
        DataSpec s;
        s.r0 = data_r0;
        s.z0 = data_z0;
        s.width = data_width;
        s.amp_omega = data_amp_omega;
        s.amp_swirl = data_amp_swirl;
        s.swirl_profile = data_swirl_profile;
        return s;
    }
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "grid.nr",          "grid.nz",          "grid.r_max",       "grid.z_max",
        "time.T",           "time.nodes",       "data.r0",          "data.z0",
        "data.width",       "data.amp_omega",   "data.amp_swirl",   "data.swirl_profile",
        "solver.picard_tol", "solver.picard_max_iters", "solver.oracle_steps",
        "solver.quad_segments", "quad.tol",     "smallness.c0",     "smallness.p0",
        "smallness.A",      "smallness.t0",     "experiment",
    };
    return keys;
}

inline int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

inline std::string nearest_key(const std::string& key) {
    std::string best;
    int bd = 1 << 30;
    for (const auto& k : config_keys()) {
        const int d = edit_distance(key, k);
        if (d < bd) {
            bd = d;
            best = k;
        }
    }
    return best;
}

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("line " + std::to_string(line) + ": expected a real number, got '" + v + "'");
    }
}

inline int parse_int(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("line " + std::to_string(line) + ": expected an integer, got '" + v + "'");
    }
}

} // namespace detail

inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string s = detail::trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string val = detail::trim(s.substr(eq + 1));

        if (key == "grid.nr") cfg.grid_nr = detail::parse_int(val, line);
        else if (key == "grid.nz") cfg.grid_nz = detail::parse_int(val, line);
        else if (key == "grid.r_max") cfg.grid_r_max = detail::parse_double(val, line);
        else if (key == "grid.z_max") cfg.grid_z_max = detail::parse_double(val, line);
        else if (key == "time.T") cfg.time_T = detail::parse_double(val, line);
        else if (key == "time.nodes") cfg.time_nodes = detail::parse_int(val, line);
        else if (key == "data.r0") cfg.data_r0 = detail::parse_double(val, line);
        else if (key == "data.z0") cfg.data_z0 = detail::parse_double(val, line);
        else if (key == "data.width") cfg.data_width = detail::parse_double(val, line);
        else if (key == "data.amp_omega") cfg.data_amp_omega = detail::parse_double(val, line);
        else if (key == "data.amp_swirl") cfg.data_amp_swirl = detail::parse_double(val, line);
        else if (key == "data.swirl_profile") {
            try {
                cfg.data_swirl_profile = swirl_profile_from_string(val);
            } catch (const std::exception&) {
                throw ConfigError("line " + std::to_string(line) +
                                  ": swirl profile must be 'gaussian' or 'compact_bump'");
            }
        } else if (key == "solver.picard_tol") cfg.solver_picard_tol = detail::parse_double(val, line);
        else if (key == "solver.picard_max_iters") cfg.solver_picard_max_iters = detail::parse_int(val, line);
        else if (key == "solver.oracle_steps") cfg.solver_oracle_steps = detail::parse_int(val, line);
        else if (key == "solver.quad_segments") cfg.solver_quad_segments = detail::parse_int(val, line);
        else if (key == "quad.tol") cfg.quad_tol = detail::parse_double(val, line);
        else if (key == "smallness.c0") cfg.smallness_c0 = detail::parse_double(val, line);
        else if (key == "smallness.p0") cfg.smallness_p0 = detail::parse_double(val, line);
        else if (key == "smallness.A") cfg.smallness_A = detail::parse_double(val, line);
        else if (key == "smallness.t0") cfg.smallness_t0 = detail::parse_double(val, line);
        else if (key == "experiment") cfg.experiment = val;
        else
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key +
                              "' (did you mean '" + detail::nearest_key(key) + "'?)");

        // constraint checks with line attribution
        auto fail = [&](const std::string& why) {
            throw ConfigError("line " + std::to_string(line) + ": " + why);
        };
        if (key == "grid.nr" && cfg.grid_nr < 1) fail("grid.nr must be positive");
        if (key == "grid.nz" && cfg.grid_nz < 1) fail("grid.nz must be positive");
        if (key == "grid.r_max" && !(cfg.grid_r_max > 0)) fail("grid.r_max must be positive");
        if (key == "grid.z_max" && !(cfg.grid_z_max > 0)) fail("grid.z_max must be positive");
        if (key == "time.T" && !(cfg.time_T > 0)) fail("time.T must be positive");
        if (key == "time.nodes" && cfg.time_nodes < 2) fail("time.nodes must be at least 2");
        if (key == "solver.picard_tol" && !(cfg.solver_picard_tol > 0)) fail("solver.picard_tol must be positive");
        if (key == "solver.picard_max_iters" && cfg.solver_picard_max_iters < 1) fail("solver.picard_max_iters must be positive");
        if (key == "solver.oracle_steps" && cfg.solver_oracle_steps < 1) fail("solver.oracle_steps must be positive");
        if (key == "solver.quad_segments" && cfg.solver_quad_segments < 2) fail("solver.quad_segments must be at least 2");
        if (key == "quad.tol" && !(cfg.quad_tol > 0)) fail("quad.tol must be positive");
        if (key == "smallness.c0" && !(cfg.smallness_c0 > 0)) fail("smallness.c0 must be positive");
        if (key == "smallness.p0" && !(cfg.smallness_p0 > 1.0 && cfg.smallness_p0 <= 21.0 / 20.0))
            fail("smallness.p0 must lie in ]1, 21/20]");
        if (key == "smallness.A" && !(cfg.smallness_A > 0)) fail("smallness.A must be positive");
        if (key == "smallness.t0" && !(cfg.smallness_t0 > 0)) fail("smallness.t0 must be positive");
    }
    return cfg;
}

inline std::string serialize_config(const RunConfig& c) {
    char buf[512];
    std::string out;
    auto put_d = [&](const char* key, double v) {
        std::snprintf(buf, sizeof(buf), "%s = %.17g\n", key, v);
        out += buf;
    };
    auto put_i = [&](const char* key, int v) {
        std::snprintf(buf, sizeof(buf), "%s = %d\n", key, v);
        out += buf;
    };
    put_i("grid.nr", c.grid_nr);
    put_i("grid.nz", c.grid_nz);
    put_d("grid.r_max", c.grid_r_max);
    put_d("grid.z_max", c.grid_z_max);
    put_d("time.T", c.time_T);
    put_i("time.nodes", c.time_nodes);
    put_d("data.r0", c.data_r0);
    put_d("data.z0", c.data_z0);
    put_d("data.width", c.data_width);
    put_d("data.amp_omega", c.data_amp_omega);
    put_d("data.amp_swirl", c.data_amp_swirl);
    out += std::string("data.swirl_profile = ") + to_string(c.data_swirl_profile) + "\n";
    put_d("solver.picard_tol", c.solver_picard_tol);
    put_i("solver.picard_max_iters", c.solver_picard_max_iters);
    put_i("solver.oracle_steps", c.solver_oracle_steps);
    put_i("solver.quad_segments", c.solver_quad_segments);
    put_d("quad.tol", c.quad_tol);
    put_d("smallness.c0", c.smallness_c0);
    put_d("smallness.p0", c.smallness_p0);
    put_d("smallness.A", c.smallness_A);
    put_d("smallness.t0", c.smallness_t0);
    out += "experiment = " + c.experiment + "\n";
    return out;
}

inline RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

inline bool operator==(const RunConfig& a, const RunConfig& b) {
    return serialize_config(a) == serialize_config(b);
}

} // namespace axiswirl
