#pragma once

#include <string>
#include <vector>

#include "swnet/network.hpp"
#include "swnet/profiles.hpp"

namespace swnet {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& w) : std::runtime_error(w) {}
};

struct EdgeConfig {
    std::string id;
    double length = 0.0;
    int cells = 0;
    std::string model = "swe";
    ProfileSpec h;        // depth initial data, or
    ProfileSpec surface;  // free-surface initial data (depth = surface - bottom)
    ProfileSpec q;        // discharge initial data (default: constant 0)
    ProfileSpec bottom;   // optional bed elevation
};

struct VertexConfig {
    std::string id;
    // endpoint list as (edge id, attaches-at-right-end)
    std::vector<std::pair<std::string, bool>> endpoints;
    std::string coupling = "equal-heights";
    double area = 1.0;          // manhole cross-section
    std::vector<double> w0;     // ODE initial state
};

struct RunConfig {
    int order = 3;
    std::string solver = "tt";  // tt | heoc
    double cfl = 0.0;           // <= 0: per-order engine default
    double t_end = 1.0;
    int ode_samples = 32;
    std::vector<double> snapshots;  // defaults to { t_end }
};

struct NetworkConfig {
    std::vector<EdgeConfig> edges;
    std::vector<VertexConfig> verts;
    RunConfig run;
    std::vector<std::string> lump_edges;
};

NetworkConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");
NetworkConfig parse_config_file(const std::string& path);
std::string render_config(const NetworkConfig& cfg);

/// Validates topology and populates initial cell averages by exact
/// integration of the configured profiles.
Network build_network(const NetworkConfig& cfg);

}  // namespace swnet
