#include "swnet/lpm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "swnet/ck.hpp"

namespace swnet {

double LumpedRegion::lumped_mass() const {
    double m = 0.0;
    for (const LumpedEdge& e : edges) m += e.length * w[e.offset];
    return m;
}

State hydrostatic_reconstruct(const State& u, double b_here, double b_neighbor) {
    const double h = std::max(0.0, u[0] + b_here - std::max(b_here, b_neighbor));
    return {h, u[1]};
}

LumpedRegion lump_region(const Network& net, const std::vector<int>& edge_ids) {
    if (edge_ids.empty()) throw LpmError("lump_region: empty edge selection");
    std::set<int> sel(edge_ids.begin(), edge_ids.end());
    for (int e : sel)
        if (e < 0 || e >= static_cast<int>(net.edges.size()))
            throw LpmError("lump_region: edge index out of range");

    // connectivity of the induced sub-network (union-find over vertices)
    std::map<int, int> root;
    std::function<int(int)> find = [&](int v) -> int {
        return root[v] == v ? v : root[v] = find(root[v]);
    };
    for (int e : sel)
        for (int end = 0; end < 2; ++end) {
            const int v = net.edges[e].vertex[end];
            if (v < 0)
                throw LpmError("lump_region: edge '" + net.edges[e].id +
                               "' has an external boundary end");
            if (!root.count(v)) root[v] = v;
        }
    for (int e : sel) {
        const int a = find(net.edges[e].vertex[0]);
        const int b = find(net.edges[e].vertex[1]);
        root[a] = b;
    }
    std::set<int> comps;
    for (const auto& [v, r] : root) comps.insert(find(v));
    if (comps.size() != 1) throw LpmError("lump_region: selected edges are not connected");

    LumpedRegion region;
    std::map<int, int> lumped_index;
    for (int e : sel) {
        const Edge& ed = net.edges[e];
        LumpedRegion::LumpedEdge le;
        le.edge = e;
        le.length = ed.length;
        le.b_end[0] = ed.bottom_at_end(false);
        le.b_end[1] = ed.bottom_at_end(true);
        le.b_datum = 0.5 * (le.b_end[0] + le.b_end[1]);
        le.offset = static_cast<int>(region.w.size());
        // spatial mean of the cell averages, depth corrected by the bottom
        // linearization mismatch so a flat surface lumps to a flat surface
        State mean{0.0, 0.0};
        for (const State& u : ed.u) mean = mean + u;
        mean = (1.0 / ed.cells) * mean;
        double corr = 0.0;
        if (ed.has_bottom()) corr = ed.bottom.mean(0.0, ed.length) - le.b_datum;
        region.w.push_back(mean[0] + corr);
        region.w.push_back(mean[1]);
        lumped_index[e] = static_cast<int>(region.edges.size());
        region.edges.push_back(le);
    }

    for (const auto& [v, r] : root) {
        const Vertex& vx = net.verts[v];
        LumpedRegion::RegionVertex rv;
        rv.vertex = v;
        if (vx.coupling.l > 0) {
            rv.w_offset = static_cast<int>(region.w.size());
            for (double x : vx.w) region.w.push_back(x);
        }
        for (const EndpointFrame& ef : vx.ends) {
            LumpedRegion::End end;
            end.edge = ef.edge;
            end.mirror = ef.mirror;
            if (sel.count(ef.edge)) {
                end.lumped = true;
                end.lumped_index = lumped_index[ef.edge];
            } else {
                end.pde_slot = region.pde_slots++;
            }
            rv.ends.push_back(end);
        }
        region.verts.push_back(std::move(rv));
    }
    return region;
}

namespace {

struct EndGeometry {
    double b_local = 0.0;  // bed level the edge itself sees at this end
    double delta = 0.0;    // vertex datum minus local level (>= 0)
};

}  // namespace

LpmStepResult lpm_stage_solve(const LumpedRegion& region, const Network& net,
                              const std::vector<SpatialJet>& pde_jets,
                              const std::vector<const BiSeries*>& pde_slopes, int order,
                              double dt, const ButcherTableau& tab,
                              const NewtonOptions& newton) {
    if (static_cast<int>(pde_jets.size()) != region.pde_slots)
        throw LpmError("lpm_stage_solve: boundary jet count mismatch");
    if (std::abs(tab.c[0]) > 1e-14)
        throw LpmError("lpm_stage_solve: tableau must have c_1 = 0");

    const int s = tab.stages;
    const int dim = region.dim();

    // per-vertex static data: models, datum levels
    const std::size_t nv = region.verts.size();
    std::vector<std::vector<const Model*>> models(nv);
    std::vector<std::vector<EndGeometry>> geom(nv);
    std::vector<double> datum(nv, 0.0);
    for (std::size_t vi = 0; vi < nv; ++vi) {
        const auto& rv = region.verts[vi];
        geom[vi].resize(rv.ends.size());
        double bmax = -1e300;
        for (std::size_t k = 0; k < rv.ends.size(); ++k) {
            const auto& end = rv.ends[k];
            models[vi].push_back(net.edges[end.edge].model.get());
            // the vertex reference level comes from the physical end
            // elevations, so it does not depend on what is lumped
            const double b = net.edges[end.edge].bottom_at_end(end.mirror);
            geom[vi][k].b_local = b;
            bmax = std::max(bmax, b);
        }
        datum[vi] = bmax;
        for (auto& gm : geom[vi]) gm.delta = datum[vi] - gm.b_local;
    }

    LpmStepResult out;
    out.boundary_flux.assign(region.pde_slots, State{0.0, 0.0});
    std::vector<std::vector<double>> slopes(s, std::vector<double>(dim, 0.0));
    std::vector<TimeJet> traces(region.pde_slots);

    // anchor of a lumped edge at a vertex, in that vertex's frame, re-leveled
    // from the edge's linearized reference to the vertex datum (the level can
    // rise as well as drop, unlike the dry-safe interface reconstruction)
    auto lumped_anchor = [&](const std::vector<double>& w, const LumpedRegion::End& end,
                             double datum_v) {
        const auto& le = region.edges[end.lumped_index];
        State u{w[le.offset], w[le.offset + 1]};
        u = to_vertex_frame(u, end.mirror);
        const State r{std::max(0.0, u[0] + le.b_datum - datum_v), u[1]};
        if (!(r[0] > 0.0))
            throw LpmError("lumped edge '" + net.edges[le.edge].id +
                           "' ran dry against the vertex datum");
        return r;
    };

    std::vector<std::vector<std::vector<State>>> stage_g(
        s, std::vector<std::vector<State>>(nv));

    std::vector<double> wl;
    for (int l = 0; l < s; ++l) {
        wl = region.w;
        for (int j = 0; j < l; ++j)
            for (int q = 0; q < dim; ++q) wl[q] += dt * tab.a[l][j] * slopes[j][q];

        const double tl = tab.c[l] * dt;
        for (std::size_t vi = 0; vi < nv; ++vi) {
            const auto& rv = region.verts[vi];
            std::vector<State> anchors(rv.ends.size());
            for (std::size_t k = 0; k < rv.ends.size(); ++k) {
                const auto& end = rv.ends[k];
                if (end.lumped) {
                    anchors[k] = lumped_anchor(wl, end, datum[vi]);
                } else if (l == 0) {
                    anchors[k] = pde_jets[end.pde_slot].value();
                    anchors[k][0] -= geom[vi][k].delta;
                } else {
                    anchors[k] = traces[end.pde_slot].eval(tl);
                }
                if (!models[vi][k]->admissible(anchors[k]))
                    throw LpmError("region vertex '" + net.verts[rv.vertex].id +
                                   "': inadmissible stage anchor");
            }
            std::vector<double> wv;
            if (rv.w_offset >= 0)
                wv.assign(wl.begin() + rv.w_offset,
                          wl.begin() + rv.w_offset + net.verts[rv.vertex].coupling.l);
            ClassicalResult res;
            try {
                res = solve_classical(models[vi], anchors, wv, net.verts[rv.vertex].coupling,
                                      newton);
            } catch (const JunctionError& e) {
                throw LpmError("region vertex '" + net.verts[rv.vertex].id + "', stage " +
                               std::to_string(l + 1) + ": " + e.what());
            }
            out.iters += res.iters;
            stage_g[l][vi] = std::move(res.godunov);

            // vertex ODE slope
            if (rv.w_offset >= 0) {
                const std::vector<double> kw =
                    net.verts[rv.vertex].coupling.rhs(stage_g[l][vi], wv);
                for (std::size_t q = 0; q < kw.size(); ++q)
                    slopes[l][rv.w_offset + q] = kw[q];
            }

            // after the first stage, flip the live-edge data into time
            if (l == 0) {
                for (std::size_t k = 0; k < rv.ends.size(); ++k) {
                    const auto& end = rv.ends[k];
                    if (end.lumped) continue;
                    SpatialJet sj = pde_jets[end.pde_slot];
                    sj.d[0][0] = stage_g[0][vi][k][0];
                    sj.d[1][0] = stage_g[0][vi][k][1];
                    traces[end.pde_slot] = ck_transform(
                        sj, *models[vi][k], pde_slopes[end.pde_slot], order);
                }
            }
        }

        // lumped-edge slopes and boundary flux accumulation
        for (std::size_t vi = 0; vi < nv; ++vi) {
            const auto& rv = region.verts[vi];
            for (std::size_t k = 0; k < rv.ends.size(); ++k) {
                const auto& end = rv.ends[k];
                const State& ug = stage_g[l][vi][k];
                const ShallowWater* sw = dynamic_cast<const ShallowWater*>(models[vi][k]);
                State f = models[vi][k]->flux(ug);
                if (end.lumped) {
                    const auto& le = region.edges[end.lumped_index];
                    // correction back to the edge's own end level
                    const double dl = datum[vi] - le.b_end[end.mirror ? 1 : 0];
                    if (sw && dl != 0.0)
                        f[1] += 0.5 * sw->gravity() * (2.0 * dl * ug[0] + dl * dl);
                    const State fe = flux_to_edge_frame(f, end.mirror);
                    const double sgn = end.mirror ? -1.0 : 1.0;  // left end adds, right end removes
                    slopes[l][le.offset + 0] += sgn * fe[0] / le.length;
                    slopes[l][le.offset + 1] += sgn * fe[1] / le.length;
                } else {
                    const double dl = geom[vi][k].delta;
                    if (sw && dl != 0.0)
                        f[1] += 0.5 * sw->gravity() * (2.0 * dl * ug[0] + dl * dl);
                    out.boundary_flux[end.pde_slot][0] += tab.b[l] * f[0];
                    out.boundary_flux[end.pde_slot][1] += tab.b[l] * f[1];
                }
            }
        }
        // linearized bed source on lumped edges
        for (const auto& le : region.edges) {
            const Edge& ed = net.edges[le.edge];
            if (!ed.has_bottom()) continue;
            const ShallowWater* sw = dynamic_cast<const ShallowWater*>(ed.model.get());
            if (!sw) continue;
            // hydrostatically consistent mean depth at this stage
            const double h_mean = wl[le.offset];
            const double hl = h_mean + le.b_datum - le.b_end[0];
            const double hr = h_mean + le.b_datum - le.b_end[1];
            slopes[l][le.offset + 1] +=
                -sw->gravity() * 0.5 * (hl + hr) * (le.b_end[1] - le.b_end[0]) / le.length;
        }
    }

    out.w_new = region.w;
    for (int l = 0; l < s; ++l)
        for (int q = 0; q < dim; ++q) out.w_new[q] += dt * tab.b[l] * slopes[l][q];
    return out;
}

}  // namespace swnet
