#include "swnet/network.hpp"

namespace swnet {

State to_vertex_frame(const State& u, bool mirror) {
    return mirror ? State{u[0], -u[1]} : u;
}

SpatialJet to_vertex_frame(const SpatialJet& j, bool mirror) {
    if (!mirror) return j;
    SpatialJet r = j;
    for (int l = 0; l < r.len; ++l) {
        const double parity = (l % 2 == 0) ? 1.0 : -1.0;
        r.d[0][l] = parity * j.d[0][l];
        r.d[1][l] = -parity * j.d[1][l];
    }
    return r;
}

TimeJet time_jet_to_edge_frame(const TimeJet& j, bool mirror) {
    if (!mirror) return j;
    TimeJet r = j;
    for (int l = 0; l < r.len; ++l) r.d[1][l] = -j.d[1][l];
    return r;
}

State flux_to_edge_frame(const State& f, bool mirror) {
    return mirror ? State{-f[0], f[1]} : f;
}

int Network::edge_index(const std::string& id) const {
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].id == id) return static_cast<int>(i);
    return -1;
}

int Network::vertex_index(const std::string& id) const {
    for (std::size_t i = 0; i < verts.size(); ++i)
        if (verts[i].id == id) return static_cast<int>(i);
    return -1;
}

State Network::totals_pde() const {
    State t{0.0, 0.0};
    for (const Edge& e : edges) {
        if (e.lumped) continue;
        State s{0.0, 0.0};
        for (const State& u : e.u) s = s + u;
        t = t + e.dx * s;
    }
    return t;
}

double Network::totals_vertex_mass() const {
    double m = 0.0;
    for (const Vertex& v : verts) m += v.stored_mass();
    return m;
}

}  // namespace swnet
