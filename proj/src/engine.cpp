#include "swnet/engine.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

#include "swnet/ck.hpp"
#include "swnet/quadrature.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace swnet {

SolverKind solver_from_name(const std::string& name) {
    if (name == "tt") return SolverKind::tt;
    if (name == "heoc") return SolverKind::heoc;
    throw EngineError("unknown solver '" + name + "' (expected tt|heoc)");
}

double default_cfl(int order) {
    (void)order;  // the shipped biased stencils are stable up to CFL 1 for all orders
    return 0.9;
}

Engine::Engine(Network net, StepOptions opt) : net_(std::move(net)), opt_(opt) {
    if (opt_.order < 1 || opt_.order > kMaxOrder)
        throw EngineError("order must be in 1.." + std::to_string(kMaxOrder));
    if (opt_.cfl <= 0.0) opt_.cfl = default_cfl(opt_.order);
    if (opt_.solver == SolverKind::heoc && opt_.order > 6)
        throw EngineError("heoc solver is limited to order 6 by the shipped tableaus");
    (void)ButcherTableau::for_order(std::min(opt_.order, 6));
    validate();
    scratch_.resize(net_.edges.size());
    for (std::size_t e = 0; e < net_.edges.size(); ++e) {
        Edge& ed = net_.edges[e];
        EdgeScratch& sc = scratch_[e];
        sc.bjet.assign(ed.cells + 1, {});
        if (ed.has_bottom())
            for (int m = 0; m <= ed.cells; ++m)
                sc.bjet[m] = ed.bottom.deriv_jet(m * ed.dx, opt_.order);
    }
    GaussRule::get(32);  // warm caches before parallel regions
    (void)recon_poly_table(1);
}

void Engine::validate() const {
    const int K = opt_.order;
    for (const Edge& e : net_.edges) {
        if (e.cells < 2 * K - 1)
            throw EngineError("edge " + e.id + ": needs at least " + std::to_string(2 * K - 1) +
                              " cells for order " + std::to_string(K));
    }
    for (const Vertex& v : net_.verts) {
        if (v.coupling.pass_through && v.ends.size() != 2)
            throw EngineError("vertex " + v.id + ": pass-through coupling needs exactly 2 ends");
    }
}

void Engine::lump(const std::vector<std::string>& edge_ids) {
    if (region_) throw EngineError("a lumped region is already configured");
    std::vector<int> ids;
    for (const std::string& id : edge_ids) {
        const int e = net_.edge_index(id);
        if (e < 0) throw EngineError("lump: no edge '" + id + "'");
        ids.push_back(e);
    }
    region_ = lump_region(net_, ids);
    for (int e : ids) net_.edges[e].lumped = true;
}

double Engine::compute_dt(double cfl) const {
    if (!(cfl > 0.0)) throw EngineError("compute_dt: CFL number must be positive");
    double dt = std::numeric_limits<double>::infinity();
    for (const Edge& e : net_.edges) {
        if (e.lumped) continue;
        double smax = 0.0;
        for (const State& u : e.u) smax = std::max(smax, e.model->max_wave_speed(u));
        if (smax > 0.0) dt = std::min(dt, cfl * e.dx / smax);
    }
    if (!std::isfinite(dt)) throw EngineError("compute_dt: no live cells or zero wave speeds");
    return dt;
}

bool Engine::pass_through_at(int edge, bool right_end) const {
    const int vi = net_.edges[edge].vertex[right_end ? 1 : 0];
    if (vi < 0) return false;
    const Vertex& v = net_.verts[vi];
    if (!v.coupling.pass_through || v.ends.size() != 2) return false;
    for (const EndpointFrame& ef : v.ends)
        if (net_.edges[ef.edge].lumped) return false;
    return true;
}

void Engine::fill_padded(int e) {
    Edge& ed = net_.edges[e];
    EdgeScratch& sc = scratch_[e];
    const int K = opt_.order;
    const int n = ed.cells;

    auto surface = [](const Edge& edge, int cell) {
        double h = edge.u[cell][0];
        if (edge.has_bottom()) h += edge.bottom_cell_mean[cell];
        return State{h, edge.u[cell][1]};
    };

    for (int side = 0; side < 2; ++side) {
        const bool right = side == 1;
        const int vi = ed.vertex[side];
        const int g = (vi < 0 || pass_through_at(e, right)) ? K : 0;
        (right ? sc.ghosts_right : sc.ghosts_left) = g;
    }
    sc.padded.assign(n + sc.ghosts_left + sc.ghosts_right, State{0.0, 0.0});
    for (int i = 0; i < n; ++i) sc.padded[sc.ghosts_left + i] = surface(ed, i);

    for (int side = 0; side < 2; ++side) {
        const bool right = side == 1;
        const int g = right ? sc.ghosts_right : sc.ghosts_left;
        if (g == 0) continue;
        const int vi = ed.vertex[side];
        if (vi < 0) {
            const State edge_val = surface(ed, right ? n - 1 : 0);
            for (int j = 0; j < g; ++j)
                sc.padded[right ? sc.ghosts_left + n + j : sc.ghosts_left - 1 - j] = edge_val;
            continue;
        }
        // pass-through exchange: continue the channel into the twin edge
        const Vertex& v = net_.verts[vi];
        const EndpointFrame& other =
            (v.ends[0].edge == e && v.ends[0].mirror == right) ? v.ends[1] : v.ends[0];
        const Edge& oe = net_.edges[other.edge];
        const bool flip = (other.mirror == right);  // same-end attachments oppose orientation
        for (int j = 1; j <= g; ++j) {
            const int cell = other.mirror ? oe.cells - j : j - 1;
            State s = surface(oe, cell);
            if (flip) s[1] = -s[1];
            sc.padded[right ? sc.ghosts_left + n + (j - 1) : sc.ghosts_left - j] = s;
        }
    }
}

void Engine::build_traces(int e) {
    Edge& ed = net_.edges[e];
    EdgeScratch& sc = scratch_[e];
    const int K = opt_.order;
    const int n = ed.cells;
    const int bias = stencil_bias(K);
    const TraceScheme scheme{K, opt_.weno, 1e-6, 2};

    sc.trace_l.assign(n + 1, SpatialJet{});
    sc.trace_r.assign(n + 1, SpatialJet{});
    sc.flux_mass.assign(n + 1, 0.0);
    sc.flux_mom_left.assign(n + 1, 0.0);
    sc.flux_mom_right.assign(n + 1, 0.0);

    const int lo = -sc.ghosts_left, hi = n + sc.ghosts_right - K;
    auto window = [&](int s) { return sc.padded.data() + (sc.ghosts_left + s); };

    for (int m = 0; m <= n; ++m) {
        const bool need_left = m > 0 || sc.ghosts_left > 0;
        const bool need_right = m < n || sc.ghosts_right > 0;
        if (need_left) {
            const int s = std::min(std::max(m - K + bias, lo), hi);
            sc.trace_l[m] = trace_jet(window(s), scheme, m - s, TraceSide::left, ed.dx);
        }
        if (need_right) {
            const int s = std::min(std::max(m - bias, lo), hi);
            sc.trace_r[m] = trace_jet(window(s), scheme, m - s, TraceSide::right, ed.dx);
        }
        if (ed.has_bottom()) {
            for (SpatialJet* j : {&sc.trace_l[m], &sc.trace_r[m]}) {
                if (j->len == 0) continue;
                for (int l = 0; l < K; ++l) j->d[0][l] -= sc.bjet[m][l];
            }
        }
    }
}

SpatialJet Engine::endpoint_jet(int e, bool right_end) const {
    const EdgeScratch& sc = scratch_[e];
    const Edge& ed = net_.edges[e];
    const SpatialJet& j = right_end ? sc.trace_l[ed.cells] : sc.trace_r[0];
    return to_vertex_frame(j, right_end);
}

namespace {

/// Audusse-type momentum correction: re-adds the hydrostatic imbalance of
/// moving a state from the common interface datum back to the side's own bed
/// level; delta = datum - local level.
double datum_correction(const Model* model, double delta, double h_datum) {
    if (delta == 0.0) return 0.0;
    const auto* sw = dynamic_cast<const ShallowWater*>(model);
    if (!sw) return 0.0;
    return 0.5 * sw->gravity() * (2.0 * delta * h_datum + delta * delta);
}

}  // namespace

/// Flux across one interface given the two traces in a common frame
/// (+x pointing from the left side into the right side).
Engine::SharedFlux Engine::solve_shared(const Model* ml, const Model* mr, const SpatialJet& jl,
                                        const SpatialJet& jr, double bl, double br,
                                        const BiSeries* slope_back, const BiSeries* slope_fwd,
                                        long& iters) {
    const int K = opt_.order;
    const double datum = std::max(bl, br);
    const double dl = datum - bl, dr = datum - br;

    std::vector<SpatialJet> jets{to_vertex_frame(jl, true), jr};
    jets[0].d[0][0] -= dl;
    jets[1].d[0][0] -= dr;
    const std::vector<const Model*> models{ml, mr};
    const std::vector<const BiSeries*> slopes{slope_back, slope_fwd};

    static const CouplingSpec trans = coupling_transmission();
    SharedFlux f{};
    if (opt_.solver == SolverKind::tt) {
        const TTResult r = solve_tt(models, jets, {}, trans, K, dt_, slopes, opt_.newton);
        iters += r.iters;
        f.mass = r.flux_avg[1][0];
        f.mom_l = r.flux_avg[0][1] +
                  datum_correction(ml, dl, r.godunov[0].component(0, K).mean(dt_));
        f.mom_r = r.flux_avg[1][1] +
                  datum_correction(mr, dr, r.godunov[1].component(0, K).mean(dt_));
    } else {
        const ButcherTableau& tab = ButcherTableau::for_order(K);
        const HeocResult r = solve_heoc(models, jets, {}, trans, K, dt_, tab, slopes, opt_.newton);
        iters += r.iters;
        f.mass = r.flux_avg[1][0];
        double hl = 0.0, hr = 0.0;
        for (int l = 0; l < tab.stages; ++l) {
            hl += tab.b[l] * r.stage_godunov[l][0][0];
            hr += tab.b[l] * r.stage_godunov[l][1][0];
        }
        f.mom_l = r.flux_avg[0][1] + datum_correction(ml, dl, hl);
        f.mom_r = r.flux_avg[1][1] + datum_correction(mr, dr, hr);
    }
    return f;
}

void Engine::solve_interior(int e, int m, long& iters) {
    Edge& ed = net_.edges[e];
    EdgeScratch& sc = scratch_[e];
    const int K = opt_.order;

    BiSeries sm, sp;
    const BiSeries *pm = nullptr, *pp = nullptr;
    if (ed.has_bottom()) {
        sm = ed.bottom.slope_series(m * ed.dx, K, -1.0);
        sp = ed.bottom.slope_series(m * ed.dx, K, +1.0);
        pm = &sm;
        pp = &sp;
    }
    const double b = ed.has_bottom() ? ed.bottom_interface[m] : 0.0;
    try {
        const SharedFlux f = solve_shared(ed.model.get(), ed.model.get(), sc.trace_l[m],
                                          sc.trace_r[m], b, b, pm, pp, iters);
        sc.flux_mass[m] = f.mass;
        sc.flux_mom_left[m] = f.mom_l;
        sc.flux_mom_right[m] = f.mom_r;
    } catch (const std::runtime_error& err) {
        std::ostringstream os;
        os << "t=" << t_ << " edge " << ed.id << " interface " << m << ": " << err.what();
        throw EngineError(os.str());
    }
}

void Engine::solve_pass_through(int vi, long& iters) {
    const Vertex& v = net_.verts[vi];
    const EndpointFrame a = v.ends[0], b = v.ends[1];
    const Edge& ea = net_.edges[a.edge];
    const Edge& eb = net_.edges[b.edge];
    const int K = opt_.order;

    // shared frame: +x leaves edge A through the vertex into edge B
    const SpatialJet jl = a.mirror ? scratch_[a.edge].trace_l[ea.cells]
                                   : to_vertex_frame(scratch_[a.edge].trace_r[0], true);
    const SpatialJet jr = b.mirror ? to_vertex_frame(scratch_[b.edge].trace_l[eb.cells], true)
                                   : scratch_[b.edge].trace_r[0];
    const double bla = ea.bottom_at_end(a.mirror);
    const double blb = eb.bottom_at_end(b.mirror);

    BiSeries sa, sb;
    const BiSeries *pa = nullptr, *pb = nullptr;
    if (ea.has_bottom()) {
        // slope of A's bed seen by the junction-frame edge pointing back into A
        sa = ea.bottom.slope_series(a.mirror ? ea.length : 0.0, K, a.mirror ? -1.0 : 1.0);
        pa = &sa;
    }
    if (eb.has_bottom()) {
        sb = eb.bottom.slope_series(b.mirror ? eb.length : 0.0, K, b.mirror ? -1.0 : 1.0);
        pb = &sb;
    }

    try {
        const SharedFlux f =
            solve_shared(ea.model.get(), eb.model.get(), jl, jr, bla, blb, pa, pb, iters);
        // distribute to both ends in their own edge frames
        {
            EdgeScratch& sc = scratch_[a.edge];
            const int m = a.mirror ? ea.cells : 0;
            sc.flux_mass[m] = a.mirror ? f.mass : -f.mass;
            sc.flux_mom_left[m] = f.mom_l;
            sc.flux_mom_right[m] = f.mom_l;
        }
        {
            EdgeScratch& sc = scratch_[b.edge];
            const int m = b.mirror ? eb.cells : 0;
            sc.flux_mass[m] = b.mirror ? -f.mass : f.mass;
            sc.flux_mom_left[m] = f.mom_r;
            sc.flux_mom_right[m] = f.mom_r;
        }
    } catch (const std::runtime_error& err) {
        std::ostringstream os;
        os << "t=" << t_ << " vertex " << v.id << " (pass-through): " << err.what();
        throw EngineError(os.str());
    }
}

void Engine::solve_vertex(int vi, std::vector<double>& w_next, long& iters) {
    Vertex& v = net_.verts[vi];
    const int K = opt_.order;
    const std::size_t n = v.ends.size();

    std::vector<const Model*> models(n);
    std::vector<SpatialJet> jets(n);
    std::vector<BiSeries> slope_store(n);
    std::vector<const BiSeries*> slopes(n, nullptr);
    std::vector<double> delta(n, 0.0);

    double datum = -1e300;
    for (std::size_t k = 0; k < n; ++k)
        datum = std::max(datum, net_.edges[v.ends[k].edge].bottom_at_end(v.ends[k].mirror));

    for (std::size_t k = 0; k < n; ++k) {
        const EndpointFrame& ef = v.ends[k];
        const Edge& ed = net_.edges[ef.edge];
        models[k] = ed.model.get();
        jets[k] = endpoint_jet(ef.edge, ef.mirror);
        delta[k] = datum - ed.bottom_at_end(ef.mirror);
        jets[k].d[0][0] -= delta[k];
        if (ed.has_bottom()) {
            slope_store[k] =
                ed.bottom.slope_series(ef.mirror ? ed.length : 0.0, K, ef.mirror ? -1.0 : 1.0);
            slopes[k] = &slope_store[k];
        }
    }

    try {
        std::vector<State> flux(n);
        if (opt_.solver == SolverKind::tt) {
            const TTResult r = solve_tt(models, jets, v.w, v.coupling, K, dt_, slopes, opt_.newton);
            iters += r.iters;
            for (std::size_t k = 0; k < n; ++k) {
                flux[k] = r.flux_avg[k];
                flux[k][1] += datum_correction(models[k], delta[k],
                                               r.godunov[k].component(0, K).mean(dt_));
            }
            if (v.coupling.l > 0) w_next = r.w_new;
        } else {
            const ButcherTableau& tab = ButcherTableau::for_order(K);
            const HeocResult r =
                solve_heoc(models, jets, v.w, v.coupling, K, dt_, tab, slopes, opt_.newton);
            iters += r.iters;
            for (std::size_t k = 0; k < n; ++k) {
                flux[k] = r.flux_avg[k];
                double hmean = 0.0;
                for (int l = 0; l < tab.stages; ++l)
                    hmean += tab.b[l] * r.stage_godunov[l][k][0];
                flux[k][1] += datum_correction(models[k], delta[k], hmean);
            }
            if (v.coupling.l > 0) w_next = r.w_new;
        }
        for (std::size_t k = 0; k < n; ++k) {
            const EndpointFrame& ef = v.ends[k];
            EdgeScratch& sc = scratch_[ef.edge];
            const int m = ef.mirror ? net_.edges[ef.edge].cells : 0;
            const State fe = flux_to_edge_frame(flux[k], ef.mirror);
            sc.flux_mass[m] = fe[0];
            sc.flux_mom_left[m] = fe[1];
            sc.flux_mom_right[m] = fe[1];
        }
    } catch (const std::runtime_error& err) {
        std::ostringstream os;
        os << "t=" << t_ << " vertex " << v.id << ": " << err.what();
        throw EngineError(os.str());
    }
}

void Engine::apply_region(double dt, long& iters) {
    LumpedRegion& R = *region_;
    std::vector<SpatialJet> pde_jets(R.pde_slots);
    std::vector<BiSeries> slope_store(R.pde_slots);
    std::vector<const BiSeries*> pde_slopes(R.pde_slots, nullptr);
    for (const auto& rv : R.verts) {
        for (const auto& end : rv.ends) {
            if (end.lumped) continue;
            const Edge& ed = net_.edges[end.edge];
            pde_jets[end.pde_slot] = endpoint_jet(end.edge, end.mirror);
            if (ed.has_bottom()) {
                slope_store[end.pde_slot] = ed.bottom.slope_series(
                    end.mirror ? ed.length : 0.0, opt_.order, end.mirror ? -1.0 : 1.0);
                pde_slopes[end.pde_slot] = &slope_store[end.pde_slot];
            }
        }
    }
    const ButcherTableau& tab = ButcherTableau::for_order(std::min(opt_.order, 6));
    LpmStepResult res;
    try {
        res = lpm_stage_solve(R, net_, pde_jets, pde_slopes, opt_.order, dt, tab, opt_.newton);
    } catch (const std::runtime_error& err) {
        std::ostringstream os;
        os << "t=" << t_ << " lumped region: " << err.what();
        throw EngineError(os.str());
    }
    iters += res.iters;
    for (const auto& rv : R.verts) {
        for (const auto& end : rv.ends) {
            if (end.lumped) continue;
            EdgeScratch& sc = scratch_[end.edge];
            const int m = end.mirror ? net_.edges[end.edge].cells : 0;
            const State fe = flux_to_edge_frame(res.boundary_flux[end.pde_slot], end.mirror);
            sc.flux_mass[m] = fe[0];
            sc.flux_mom_left[m] = fe[1];
            sc.flux_mom_right[m] = fe[1];
        }
    }
    R.w = std::move(res.w_new);
    for (const auto& rv : R.verts) {
        if (rv.w_offset < 0) continue;
        Vertex& v = net_.verts[rv.vertex];
        for (int q = 0; q < v.coupling.l; ++q) v.w[q] = R.w[rv.w_offset + q];
    }
}

void Engine::apply_sources(int e, double dt) {
    Edge& ed = net_.edges[e];
    if (!ed.has_bottom() || ed.lumped) return;
    EdgeScratch& sc = scratch_[e];
    const int K = opt_.order;
    const auto* sw = dynamic_cast<const ShallowWater*>(ed.model.get());
    if (!sw) return;
    const double g = sw->gravity();
    const int npts = std::min(32, (K + std::max(ed.bottom.degree(), 1)) / 2 + 1);
    const GaussRule& gr = GaussRule::get(npts);

    for (int i = 0; i < ed.cells; ++i) {
        BiSeries slope = ed.bottom.slope_series(i * ed.dx, K, +1.0);
        const BiState ck = ck_expand(sc.trace_r[i], *ed.model, &slope, K);
        // time-averaged free-surface polynomial, coefficients in (x - x_i)
        std::array<double, kMaxJet> hs{};
        double fact = 1.0;
        for (int b = 0; b < K; ++b) {
            if (b > 0) fact *= b;
            double acc = 0.0, dp = 1.0;
            for (int a = 0; a + b < K; ++a) {
                acc += ck[0].at(a, b) * dp / (a + 1);
                dp *= dt;
            }
            hs[b] = acc + sc.bjet[i][b] / fact;
        }
        const double x0 = i * ed.dx;
        double integral = 0.0;
        for (std::size_t q = 0; q < gr.x.size(); ++q) {
            const double xi = 0.5 * (gr.x[q] + 1.0) * ed.dx;
            double hval = 0.0;
            for (int b = K - 1; b >= 0; --b) hval = hval * xi + hs[b];
            integral += 0.5 * ed.dx * gr.w[q] * hval * ed.bottom.deriv(x0 + xi);
        }
        const double b0 = ed.bottom_interface[i], b1 = ed.bottom_interface[i + 1];
        const double src = -(g / ed.dx) * (integral - 0.5 * (b1 * b1 - b0 * b0));
        ed.u[i][1] += dt * src;
    }
}

void Engine::update_cells(int e, double dt) {
    Edge& ed = net_.edges[e];
    EdgeScratch& sc = scratch_[e];
    const double lam = dt / ed.dx;
    for (int i = 0; i < ed.cells; ++i) {
        ed.u[i][0] -= lam * (sc.flux_mass[i + 1] - sc.flux_mass[i]);
        ed.u[i][1] -= lam * (sc.flux_mom_left[i + 1] - sc.flux_mom_right[i]);
        if (!ed.model->admissible(ed.u[i])) {
            std::ostringstream os;
            os << "t=" << t_ << " edge " << ed.id << " cell " << i
               << ": update left the admissible set (h=" << ed.u[i][0] << ")";
            throw EngineError(os.str());
        }
    }
}

StepStats Engine::step(double dt_cap) {
    StepStats st;
    dt_ = std::min(compute_dt(opt_.cfl), dt_cap);
    if (!(dt_ > 0.0)) throw EngineError("step: nonpositive time step");
    st.dt = dt_;
    st.steps = 1;

    const int ne = static_cast<int>(net_.edges.size());
    long iters = 0;
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    auto capture = [&](std::exception_ptr p) {
#ifdef _OPENMP
#pragma omp critical(swnet_engine_error)
#endif
        {
            if (!first_error) first_error = p;
        }
        failed.store(true, std::memory_order_relaxed);
    };

    // phase 1: reconstruction, edge-parallel
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opt_.parallel)
#endif
    for (int e = 0; e < ne; ++e) {
        if (net_.edges[e].lumped) continue;
        fill_padded(e);
        build_traces(e);
    }

    // phase 2: generalized Riemann problems
    struct Task {
        int kind;  // 0 interior/external interface, 1 pass-through vertex, 2 vertex
        int a, b;
    };
    std::vector<Task> tasks;
    for (int e = 0; e < ne; ++e) {
        if (net_.edges[e].lumped) continue;
        const Edge& ed = net_.edges[e];
        for (int m = 1; m < ed.cells; ++m) tasks.push_back({0, e, m});
        if (ed.vertex[0] < 0) tasks.push_back({0, e, 0});
        if (ed.vertex[1] < 0) tasks.push_back({0, e, ed.cells});
    }
    std::vector<char> region_vertex(net_.verts.size(), 0);
    if (region_)
        for (const auto& rv : region_->verts) region_vertex[rv.vertex] = 1;
    for (int vi = 0; vi < static_cast<int>(net_.verts.size()); ++vi) {
        if (region_vertex[vi]) continue;
        const Vertex& v = net_.verts[vi];
        bool pass = v.coupling.pass_through && v.ends.size() == 2;
        if (pass)
            for (const EndpointFrame& ef : v.ends)
                if (net_.edges[ef.edge].lumped) pass = false;
        tasks.push_back({pass ? 1 : 2, vi, 0});
    }

    w_next_.assign(net_.verts.size(), {});
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : iters) if (opt_.parallel)
#endif
    for (long ti = 0; ti < static_cast<long>(tasks.size()); ++ti) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            const Task& t = tasks[ti];
            if (t.kind == 0)
                solve_interior(t.a, t.b, iters);
            else if (t.kind == 1)
                solve_pass_through(t.a, iters);
            else
                solve_vertex(t.a, w_next_[t.a], iters);
        } catch (...) {
            capture(std::current_exception());
        }
    }
    if (first_error) std::rethrow_exception(first_error);

    if (region_) apply_region(dt_, iters);

    // phase 3: sources and conservative update, edge-parallel
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opt_.parallel)
#endif
    for (int e = 0; e < ne; ++e) {
        if (net_.edges[e].lumped || failed.load(std::memory_order_relaxed)) continue;
        try {
            apply_sources(e, dt_);
            update_cells(e, dt_);
        } catch (...) {
            capture(std::current_exception());
        }
    }
    if (first_error) std::rethrow_exception(first_error);

    for (std::size_t vi = 0; vi < net_.verts.size(); ++vi)
        if (!w_next_[vi].empty()) net_.verts[vi].w = w_next_[vi];

    t_ += dt_;
    st.newton_iters = iters;
    return st;
}

StepStats Engine::advance_to(double t) {
    StepStats total;
    const double scale = std::max(1.0, std::abs(t));
    while (t_ < t - 1e-13 * scale) {
        const StepStats s = step(t - t_);
        total.dt = s.dt;
        total.steps += 1;
        total.newton_iters += s.newton_iters;
    }
    t_ = t;
    return total;
}

State Engine::total_conserved() const {
    State tot = net_.totals_pde();
    tot[0] += net_.totals_vertex_mass();
    if (region_) tot[0] += region_->lumped_mass();
    return tot;
}

}  // namespace swnet
