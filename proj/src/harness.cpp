#include "swnet/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

namespace swnet {
namespace {

EdgeConfig edge(const std::string& id, double length, int cells, ProfileSpec h, ProfileSpec q) {
    EdgeConfig e;
    e.id = id;
    e.length = length;
    e.cells = cells;
    e.h = std::move(h);
    e.q = std::move(q);
    return e;
}

ProfileSpec constant(double v) { return {"constant", {v}}; }

VertexConfig vertex(const std::string& id,
                    std::vector<std::pair<std::string, bool>> endpoints, std::string coupling,
                    std::vector<double> w0 = {}, double area = 1.0) {
    VertexConfig v;
    v.id = id;
    v.endpoints = std::move(endpoints);
    v.coupling = std::move(coupling);
    v.w0 = std::move(w0);
    v.area = area;
    return v;
}

NetworkConfig split_circle() {
    NetworkConfig c;
    const ProfileSpec h{"hermite", {2.0, 3.0, 7.0}};
    for (const char* id : {"E1", "E2", "E3"}) c.edges.push_back(edge(id, 25.0, 100, h, constant(0)));
    c.verts.push_back(vertex("V1", {{"E1", false}, {"E2", false}, {"E3", false}}, "manhole",
                             {2.0, 0.0}, 1.0));
    c.verts.push_back(vertex("V2", {{"E1", true}, {"E2", true}, {"E3", true}}, "manhole",
                             {3.0, 0.0}, 1.0));
    c.run.t_end = 2.4;
    c.run.order = 4;
    c.run.solver = "tt";
    return c;
}

NetworkConfig diamond_lpm() {
    NetworkConfig c;
    c.edges.push_back(edge("E1", 25.0, 100, {"hermite3", {5.0, 5.3, 5.0, 6.0}}, constant(0)));
    for (const char* id : {"E2", "E3", "E4", "E5", "E6"})
        c.edges.push_back(edge(id, 25.0, 100, constant(5.0), constant(0)));
    c.verts.push_back(vertex("V1", {{"E1", false}, {"E2", true}, {"E3", false}}, "manhole",
                             {5.0, 0.0}, 1.0));
    c.verts.push_back(vertex("V2", {{"E1", true}, {"E5", false}, {"E6", false}}, "equal-heights"));
    c.verts.push_back(vertex("V3", {{"E2", false}, {"E4", true}, {"E5", true}}, "manhole",
                             {5.0, 0.0}, 1.0));
    c.verts.push_back(vertex("V4", {{"E3", true}, {"E4", false}, {"E6", true}}, "equal-heights"));
    c.lump_edges = {"E2", "E3", "E4", "E5", "E6"};
    c.run.t_end = 7.0;
    c.run.order = 4;
    c.run.solver = "heoc";
    return c;
}

NetworkConfig shock_circle() {
    NetworkConfig c;
    c.edges.push_back(edge("E1", 25.0, 50, constant(5.0), constant(0)));
    c.edges.push_back(edge("E2", 25.0, 50, constant(5.0), constant(0)));
    c.edges.push_back(edge("E3", 25.0, 50, constant(6.0), constant(0)));
    c.edges.push_back(edge("E4", 25.0, 50, constant(5.0), constant(0)));
    c.verts.push_back(vertex("V1", {{"E1", false}, {"E2", false}, {"E3", true}}, "manhole",
                             {5.0, 0.0}, 1.0));
    c.verts.push_back(vertex("V2", {{"E1", true}, {"E2", true}, {"E4", false}}, "manhole",
                             {5.0, 0.0}, 1.0));
    c.verts.push_back(vertex("V3", {{"E3", false}, {"E4", true}}, "manhole", {6.0, 0.0}, 1.0));
    c.run.t_end = 4.0;
    c.run.order = 6;
    c.run.solver = "tt";
    return c;
}

NetworkConfig tree() {
    NetworkConfig c;
    auto long_edge = [&](const std::string& id, ProfileSpec h) {
        c.edges.push_back(edge(id, 25.0, 120, std::move(h), constant(0)));
    };
    auto short_edge = [&](const std::string& id) {
        c.edges.push_back(edge(id, 2.5, 12, constant(2.0), constant(0)));
    };
    long_edge("E1", {"step", {3.0, 2.0, 18.5}});
    long_edge("E2", constant(3.0));
    long_edge("E3", constant(2.0));
    long_edge("E4", constant(2.0));
    for (int i = 5; i <= 28; ++i) short_edge("E" + std::to_string(i));
    for (const char* id : {"E29", "E30", "E31"})
        long_edge(id, constant(2.0));
    long_edge("E32", constant(2.0));

    // (edge, from, to) with from = left end
    const std::array<std::array<int, 3>, 32> topo{{{1, 1, 2},    {2, 1, 1},    {3, 2, 3},
                                                   {4, 2, 4},    {5, 3, 5},    {6, 3, 6},
                                                   {7, 4, 7},    {8, 4, 8},    {9, 5, 9},
                                                   {10, 5, 10},  {11, 6, 11},  {12, 6, 12},
                                                   {13, 7, 13},  {14, 7, 14},  {15, 8, 15},
                                                   {16, 8, 16},  {17, 9, 17},  {18, 10, 17},
                                                   {19, 11, 18}, {20, 12, 18}, {21, 13, 19},
                                                   {22, 14, 19}, {23, 15, 20}, {24, 16, 20},
                                                   {25, 17, 21}, {26, 18, 21}, {27, 19, 22},
                                                   {28, 20, 22}, {29, 21, 23}, {30, 22, 23},
                                                   {31, 23, 24}, {32, 24, 24}}};
    std::vector<std::vector<std::pair<std::string, bool>>> at(25);
    for (const auto& [e, from, to] : topo) {
        at[from].emplace_back("E" + std::to_string(e), false);
        at[to].emplace_back("E" + std::to_string(e), true);
    }
    for (int v = 1; v <= 24; ++v)
        c.verts.push_back(vertex("V" + std::to_string(v), at[v], "equal-heights"));
    c.run.t_end = 6.0;
    c.run.order = 3;
    c.run.solver = "tt";
    return c;
}

NetworkConfig wb_bottom(int which) {
    NetworkConfig c;
    ProfileSpec bottom;
    ProfileSpec surface;
    switch (which) {
        case 1:
            bottom = {"poly", {0.0, 0.3}};
            surface = {"piecewise", {3.0, 6.25, 4.0, 18.75, 3.0}};
            break;
        case 2:
            bottom = {"poly", {0.0, 0.0, 0.3}};
            surface = constant(3.0);
            break;
        default:
            bottom = {"sine-ramp", {0.3}};
            surface = constant(3.0);
            break;
    }
    for (const char* id : {"E1", "E2", "E3"}) {
        EdgeConfig e;
        e.id = id;
        e.length = 25.0;
        e.cells = 100;
        e.surface = surface;
        e.q = constant(0);
        e.bottom = bottom;
        c.edges.push_back(std::move(e));
    }
    c.verts.push_back(vertex("V1", {{"E1", false}, {"E2", false}, {"E3", false}}, "manhole",
                             {3.0, 0.0}, 1.0));
    c.verts.push_back(vertex("V2", {{"E1", true}, {"E2", true}, {"E3", true}}, "manhole",
                             {2.7, 0.0}, 1.0));
    c.lump_edges = {"E2"};
    c.run.t_end = 0.3;
    c.run.order = 4;
    c.run.solver = "heoc";
    return c;
}

}  // namespace

std::vector<std::string> builtin_case_names() {
    return {"split-circle", "diamond-lpm", "shock-circle", "tree", "wb-b1", "wb-b2", "wb-b3"};
}

NetworkConfig builtin_case(const std::string& name) {
    if (name == "split-circle") return split_circle();
    if (name == "diamond-lpm") return diamond_lpm();
    if (name == "shock-circle") return shock_circle();
    if (name == "tree") return tree();
    if (name == "wb-b1") return wb_bottom(1);
    if (name == "wb-b2") return wb_bottom(2);
    if (name == "wb-b3") return wb_bottom(3);
    throw ConfigError("unknown built-in case '" + name + "'");
}

void set_grid(NetworkConfig& cfg, int cells) {
    double lmax = 0.0;
    for (const EdgeConfig& e : cfg.edges) lmax = std::max(lmax, e.length);
    for (EdgeConfig& e : cfg.edges)
        e.cells = std::max(1, static_cast<int>(std::lround(cells * e.length / lmax)));
}

std::vector<double> hermite_init(double a, double b, int zero_derivs) {
    const auto cons = hermite_constraints(a, b, zero_derivs);
    const auto coef = solve_polynomial_constraints(cons);
    if (polynomial_constraint_residual(coef, cons) > 1e-9)
        throw std::runtime_error("hermite_init: constraint residual above 1e-9");
    return coef;
}

SimResult simulate(const NetworkConfig& cfg, bool parallel, bool keep_snapshots) {
    const auto t0 = std::chrono::steady_clock::now();
    SimResult res;
    res.cfg = cfg;

    StepOptions opt;
    opt.order = cfg.run.order;
    opt.solver = solver_from_name(cfg.run.solver);
    opt.cfl = cfg.run.cfl;
    opt.parallel = parallel;

    Engine eng(build_network(cfg), opt);
    if (!cfg.lump_edges.empty()) eng.lump(cfg.lump_edges);
    res.vertex_in_region.assign(eng.network().verts.size(), 0);
    if (eng.region())
        for (const auto& rv : eng.region()->verts) res.vertex_in_region[rv.vertex] = 1;

    // event times: uniform ODE sample grid plus the snapshot times
    std::set<double> events;
    const int m = std::max(1, cfg.run.ode_samples);
    for (int j = 0; j <= m; ++j) events.insert(cfg.run.t_end * j / m);
    if (keep_snapshots)
        for (double t : cfg.run.snapshots)
            if (t >= 0.0 && t <= cfg.run.t_end) events.insert(t);

    auto record_trace = [&]() {
        TraceSample s;
        s.t = eng.time();
        for (const Vertex& v : eng.network().verts) s.vertex_w.push_back(v.w);
        if (eng.region()) s.region_w = eng.region()->w;
        res.trace.push_back(std::move(s));
    };
    auto record_snapshot = [&]() {
        std::vector<std::vector<State>> fields;
        for (const Edge& e : eng.network().edges) fields.push_back(e.u);
        res.snapshots.emplace_back(eng.time(), std::move(fields));
    };

    record_trace();
    if (keep_snapshots && std::find(cfg.run.snapshots.begin(), cfg.run.snapshots.end(), 0.0) !=
                              cfg.run.snapshots.end())
        record_snapshot();

    for (double t : events) {
        if (t <= 0.0) continue;
        const StepStats st = eng.advance_to(t);
        res.steps += st.steps;
        res.newton_iters += st.newton_iters;
        record_trace();
        if (keep_snapshots && std::find(cfg.run.snapshots.begin(), cfg.run.snapshots.end(), t) !=
                                  cfg.run.snapshots.end())
            record_snapshot();
    }

    res.net = eng.network();
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

PdeErrors pde_errors(const Network& coarse, const Network& fine) {
    PdeErrors err;
    if (coarse.edges.size() != fine.edges.size())
        throw std::invalid_argument("pde_errors: networks differ in edge count");
    for (std::size_t e = 0; e < coarse.edges.size(); ++e) {
        const Edge& ec = coarse.edges[e];
        const Edge& ef = fine.edges[e];
        if (ec.lumped || ef.lumped) continue;
        if (ef.cells % ec.cells != 0)
            throw std::invalid_argument("pde_errors: grids are not nested on edge " + ec.id);
        const int ratio = ef.cells / ec.cells;
        for (int i = 0; i < ec.cells; ++i) {
            State agg{0.0, 0.0};
            for (int j = 0; j < ratio; ++j) agg = agg + ef.u[i * ratio + j];
            agg = (1.0 / ratio) * agg;
            const double dh = std::abs(ec.u[i][0] - agg[0]);
            const double dq = std::abs(ec.u[i][1] - agg[1]);
            err.l1_h += ec.dx * dh;
            err.l1_q += ec.dx * dq;
            err.linf_h = std::max(err.linf_h, dh);
            err.linf_q = std::max(err.linf_q, dq);
        }
    }
    return err;
}

double ode_l2(const SimResult& run, const SimResult& ref) {
    if (run.trace.size() != ref.trace.size())
        throw std::invalid_argument("ode_l2: traces have different sample grids");
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < run.trace.size(); ++j) {
        // trapezoid over the shared sample grid
        auto sq = [&](std::size_t idx) {
            const TraceSample& a = run.trace[idx];
            const TraceSample& b = ref.trace[idx];
            if (std::abs(a.t - b.t) > 1e-12 * std::max(1.0, std::abs(a.t)))
                throw std::invalid_argument("ode_l2: sample times differ");
            double s = 0.0;
            for (std::size_t v = 0; v < a.vertex_w.size(); ++v) {
                if (v < run.vertex_in_region.size() && run.vertex_in_region[v])
                    continue;  // counted through the composite below
                for (std::size_t q = 0; q < a.vertex_w[v].size(); ++q) {
                    const double d = a.vertex_w[v][q] - b.vertex_w[v][q];
                    s += d * d;
                }
            }
            for (std::size_t q = 0; q < a.region_w.size(); ++q) {
                const double d = a.region_w[q] - b.region_w[q];
                s += d * d;
            }
            return s;
        };
        const double dt = run.trace[j + 1].t - run.trace[j].t;
        acc += 0.5 * dt * (sq(j) + sq(j + 1));
    }
    return std::sqrt(acc);
}

double eoc(double err_coarse, double err_fine, double dx_coarse, double dx_fine) {
    return std::log(err_coarse / err_fine) / std::log(dx_coarse / dx_fine);
}

std::vector<ConvergenceTable> convergence_study(const NetworkConfig& base,
                                                const ConvergenceOptions& opt) {
    NetworkConfig ref_cfg = base;
    ref_cfg.run.order = opt.ref_order;
    ref_cfg.run.solver = opt.solver;
    set_grid(ref_cfg, opt.ref_cells);
    if (opt.progress)
        *opt.progress << "reference: order " << opt.ref_order << ", " << opt.ref_cells
                      << " cells ..." << std::flush;
    const SimResult ref = simulate(ref_cfg, opt.parallel);
    if (opt.progress) *opt.progress << " done (" << ref.steps << " steps)\n";

    std::vector<ConvergenceTable> tables;
    for (int k : opt.orders) {
        ConvergenceTable tab;
        tab.order = k;
        tab.solver = opt.solver;
        for (int n : opt.grids) {
            NetworkConfig cfg = base;
            cfg.run.order = k;
            cfg.run.solver = opt.solver;
            set_grid(cfg, n);
            if (opt.progress)
                *opt.progress << "order " << k << ", N=" << n << " ..." << std::flush;
            const SimResult run = simulate(cfg, opt.parallel);
            ConvergenceRow row;
            row.cells = n;
            row.steps = run.steps;
            row.pde = pde_errors(run.net, ref.net);
            row.l2_ode = ode_l2(run, ref);
            if (!tab.rows.empty()) {
                const ConvergenceRow& prev = tab.rows.back();
                const double rx = static_cast<double>(n) / prev.cells;
                row.eoc_l1 = eoc(prev.pde.l1_h, row.pde.l1_h, rx, 1.0);
                row.eoc_linf = eoc(prev.pde.linf_h, row.pde.linf_h, rx, 1.0);
                row.eoc_l2 = eoc(prev.l2_ode, row.l2_ode, rx, 1.0);
            }
            if (opt.progress)
                *opt.progress << " L1=" << std::scientific << std::setprecision(2)
                              << row.pde.l1_h << " (EOC " << std::fixed << std::setprecision(2)
                              << row.eoc_l1 << "), ODE L2=" << std::scientific
                              << std::setprecision(2) << row.l2_ode << " (EOC " << std::fixed
                              << std::setprecision(2) << row.eoc_l2 << "), steps=" << run.steps
                              << "\n";
            tab.rows.push_back(row);
        }
        tables.push_back(std::move(tab));
    }
    return tables;
}

std::string format_convergence_csv(const std::vector<ConvergenceTable>& tables) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(16);
    os << "solver,order,cells,steps,L1,EOC_L1,Linf,EOC_Linf,ODE_L2,EOC_L2,L1_q,Linf_q\n";
    for (const ConvergenceTable& t : tables)
        for (const ConvergenceRow& r : t.rows)
            os << t.solver << "," << t.order << "," << r.cells << "," << r.steps << ","
               << r.pde.l1_h << "," << r.eoc_l1 << "," << r.pde.linf_h << "," << r.eoc_linf
               << "," << r.l2_ode << "," << r.eoc_l2 << "," << r.pde.l1_q << ","
               << r.pde.linf_q << "\n";
    return os.str();
}

std::string format_convergence_text(const std::vector<ConvergenceTable>& tables) {
    std::ostringstream os;
    for (const ConvergenceTable& t : tables) {
        os << "# solver=" << t.solver << " order=" << t.order << "\n";
        os << std::setw(6) << "N" << std::setw(8) << "steps" << std::setw(12) << "L1"
           << std::setw(8) << "EOC" << std::setw(12) << "Linf" << std::setw(8) << "EOC"
           << std::setw(12) << "ODE_L2" << std::setw(8) << "EOC" << "\n";
        for (const ConvergenceRow& r : t.rows) {
            os << std::setw(6) << r.cells << std::setw(8) << r.steps << std::scientific
               << std::setprecision(2) << std::setw(12) << r.pde.l1_h << std::fixed
               << std::setprecision(2) << std::setw(8) << (r.eoc_l1 == 0.0 ? 0.0 : r.eoc_l1)
               << std::scientific << std::setprecision(2) << std::setw(12) << r.pde.linf_h
               << std::fixed << std::setprecision(2) << std::setw(8) << r.eoc_linf
               << std::scientific << std::setprecision(2) << std::setw(12) << r.l2_ode
               << std::fixed << std::setprecision(2) << std::setw(8) << r.eoc_l2 << "\n";
        }
    }
    return os.str();
}

std::string output_dir_from_env(const std::string& fallback) {
    if (const char* env = std::getenv("SWNET_OUTPUT_DIR"); env && *env) return env;
    return fallback;
}

std::vector<std::string> run_to_files(const NetworkConfig& cfg, const std::string& out_dir,
                                      bool parallel) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const SimResult res = simulate(cfg, parallel, true);

    std::vector<std::string> written;
    auto open = [&](const std::string& name) {
        const std::string path = (fs::path(out_dir) / name).string();
        written.push_back(path);
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot write '" + path + "'");
        f << std::scientific << std::setprecision(16);
        return f;
    };

    for (const auto& [t, fields] : res.snapshots) {
        std::ostringstream tag;
        tag << "t" << std::defaultfloat << std::setprecision(10) << t;
        for (std::size_t e = 0; e < res.net.edges.size(); ++e) {
            const Edge& ed = res.net.edges[e];
            if (ed.lumped) continue;
            auto f = open("edge_" + ed.id + "_" + tag.str() + ".csv");
            f << (ed.has_bottom() ? "x,h,q,b\n" : "x,h,q\n");
            for (int i = 0; i < ed.cells; ++i) {
                const double x = (i + 0.5) * ed.dx;
                f << x << "," << fields[e][i][0] << "," << fields[e][i][1];
                if (ed.has_bottom()) f << "," << ed.bottom_cell_mean[i];
                f << "\n";
            }
        }
    }

    for (std::size_t v = 0; v < res.net.verts.size(); ++v) {
        if (res.net.verts[v].coupling.l == 0) continue;
        auto f = open("vertex_" + res.net.verts[v].id + ".csv");
        f << "t";
        for (int q = 0; q < res.net.verts[v].coupling.l; ++q) f << ",w" << q;
        f << "\n";
        for (const TraceSample& s : res.trace) {
            f << s.t;
            for (double w : s.vertex_w[v]) f << "," << w;
            f << "\n";
        }
    }
    if (!res.trace.empty() && !res.trace.front().region_w.empty()) {
        auto f = open("region.csv");
        f << "t";
        for (std::size_t q = 0; q < res.trace.front().region_w.size(); ++q) f << ",w" << q;
        f << "\n";
        for (const TraceSample& s : res.trace) {
            f << s.t;
            for (double w : s.region_w) f << "," << w;
            f << "\n";
        }
    }
    return written;
}

}  // namespace swnet
