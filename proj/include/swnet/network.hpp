#pragma once

#include <memory>
#include <string>
#include <vector>

#include "swnet/coupling.hpp"
#include "swnet/jets.hpp"
#include "swnet/model.hpp"
#include "swnet/poly.hpp"

namespace swnet {

struct NetworkError : std::runtime_error {
    explicit NetworkError(const std::string& w) : std::runtime_error(w) {}
};

/// Orientation adapter between an edge's own coordinates and the junction
/// frame in which all edges point away from the vertex. mirror is true when
/// the edge attaches with its x = L end.
struct EndpointFrame {
    int edge = -1;
    bool mirror = false;
};

State to_vertex_frame(const State& u, bool mirror);
/// Spatial jets flip the sign of odd x-derivatives in addition to the
/// momentum reflection.
SpatialJet to_vertex_frame(const SpatialJet& j, bool mirror);
TimeJet time_jet_to_edge_frame(const TimeJet& j, bool mirror);
/// Flux vectors transform with the opposite parity: the mass component flips.
State flux_to_edge_frame(const State& f, bool mirror);

struct Edge {
    std::string id;
    double length = 0.0;
    int cells = 0;
    double dx = 0.0;
    std::shared_ptr<const Model> model;
    std::vector<State> u;  // cell averages

    ChebProfile bottom;  // empty profile = flat bed
    std::vector<double> bottom_cell_mean;   // per cell
    std::vector<double> bottom_interface;   // per interface (cells + 1)

    int vertex[2] = {-1, -1};  // attached vertex per end, -1 = external boundary
    bool lumped = false;

    bool has_bottom() const { return !bottom.empty(); }
    double bottom_at_end(bool right) const {
        return has_bottom() ? bottom_interface[right ? cells : 0] : 0.0;
    }
};

struct Vertex {
    std::string id;
    std::vector<EndpointFrame> ends;
    CouplingSpec coupling;
    std::vector<double> w;      // ODE state, length coupling.l
    double tank_area = 0.0;     // manhole cross-section (0 when no tank)

    /// Mass stored in the vertex itself (tank volume for manholes).
    double stored_mass() const { return coupling.l > 0 ? tank_area * w[0] : 0.0; }
};

struct Network {
    std::vector<Edge> edges;
    std::vector<Vertex> verts;

    int edge_index(const std::string& id) const;
    int vertex_index(const std::string& id) const;

    /// Total conserved quantities over PDE cells and vertex storage; lumped
    /// contributions are added by the engine, which owns the region state.
    State totals_pde() const;
    double totals_vertex_mass() const;
};

}  // namespace swnet
