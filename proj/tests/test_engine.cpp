#include <doctest.h>

#include <cmath>

#include "swnet/engine.hpp"
#include "swnet/harness.hpp"

using namespace swnet;

namespace {

// coefficients of p((off + s*xi)) given p's coefficients, both in monomials
std::vector<double> rescale_poly(const std::vector<double>& c, double off, double s) {
    const std::size_t n = c.size();
    std::vector<double> out(n, 0.0);
    std::vector<double> pw{1.0};  // (off + s xi)^k expanded iteratively
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < pw.size(); ++j) out[j] += c[k] * pw[j];
        std::vector<double> next(pw.size() + 1, 0.0);
        for (std::size_t j = 0; j < pw.size(); ++j) {
            next[j] += off * pw[j];
            next[j + 1] += s * pw[j];
        }
        pw = std::move(next);
    }
    return out;
}

}  // namespace

TEST_CASE("constant network state is a fixed point of the stepper") {
    for (const char* solver : {"tt", "heoc"}) {
        NetworkConfig cfg = builtin_case("split-circle");
        for (EdgeConfig& e : cfg.edges) {
            e.cells = 20;
            e.h = {"constant", {2.0}};
        }
        for (VertexConfig& v : cfg.verts) v.w0 = {2.0, 0.0};
        cfg.run.solver = solver;
        cfg.run.order = 3;
        StepOptions opt;
        opt.order = 3;
        opt.solver = solver_from_name(solver);
        Engine eng(build_network(cfg), opt);
        for (int s = 0; s < 5; ++s) eng.step();
        for (const Edge& e : eng.network().edges)
            for (const State& u : e.u) {
                CHECK(u[0] == doctest::Approx(2.0).epsilon(1e-13));
                CHECK(u[1] == doctest::Approx(0.0).epsilon(1e-13));
            }
        for (const Vertex& v : eng.network().verts)
            CHECK(v.w[0] == doctest::Approx(2.0).epsilon(1e-13));
    }
}

TEST_CASE("one ADER step advances polynomial data exactly for the linear model") {
    // wave-equation model: characteristics shift polynomial data exactly, so
    // an order-K one-step update of degree < K data is exact away from the
    // external boundaries
    const double a = 1.0;
    for (int K : {2, 3, 4}) {
        NetworkConfig cfg;
        EdgeConfig e;
        e.id = "c";
        e.length = 20.0;
        e.cells = 40;
        e.model = "linear";
        // u0 = poly of degree K-1 in xi, u1 = 0
        std::vector<double> coef{1.0, 0.8, -0.6, 0.4};
        coef.resize(K);
        e.h = {"poly", coef};
        e.q = {"constant", {0.0}};
        cfg.edges.push_back(e);
        cfg.run.t_end = 1.0;

        StepOptions opt;
        opt.order = K;
        opt.solver = SolverKind::tt;
        opt.weno = false;
        Engine eng(build_network(cfg), opt);
        const double dt = eng.compute_dt(0.8);
        eng.step(dt);

        // exact: u0(x,t) = (p(x-at) + p(x+at))/2 with p in xi = x/L
        const double dx = 0.5, L = 20.0;
        auto p = [&](double x) {
            double acc = 0.0, xp = 1.0;
            for (int i = 0; i < K; ++i) {
                acc += coef[i] * xp;
                xp *= x / L;
            }
            return acc;
        };
        auto pint = [&](double lo, double hi) {
            // average via fine Simpson (p is a polynomial; 64 panels exact enough)
            const int n = 64;
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                const double x0 = lo + (hi - lo) * i / n, x1 = lo + (hi - lo) * (i + 1) / n;
                s += (p(x0) + 4 * p(0.5 * (x0 + x1)) + p(x1)) / 6 * (x1 - x0);
            }
            return s / (hi - lo);
        };
        const Edge& ed = eng.network().edges[0];
        for (int i = 8; i < 32; ++i) {
            const double lo = i * dx, hi = (i + 1) * dx;
            const double expect = 0.5 * (pint(lo - a * dt, hi - a * dt) + pint(lo + a * dt, hi + a * dt));
            CHECK(ed.u[i][0] == doctest::Approx(expect).epsilon(1e-11));
        }
    }
}

TEST_CASE("one-on-one reduction: split channel equals the unsplit channel") {
    // the same physical channel meshed as one edge and as two edges joined by
    // a transmission vertex; the split halves copy the unsplit cell averages
    // so both meshes start from bitwise-identical data
    const std::vector<double> hcoef = hermite_init(2.0, 2.1, 5);
    for (const char* solver : {"tt", "heoc"}) {
        for (int K : {2, 3, 4}) {
            NetworkConfig whole;
            whole.edges.push_back(
                {"c", 50.0, 40, "swe", {"poly", hcoef}, {}, {"constant", {0.0}}, {}});
            NetworkConfig split;
            split.edges.push_back(
                {"a", 25.0, 20, "swe", {"constant", {1.0}}, {}, {"constant", {0.0}}, {}});
            split.edges.push_back(
                {"b", 25.0, 20, "swe", {"constant", {1.0}}, {}, {"constant", {0.0}}, {}});
            split.verts.push_back({"j", {{"a", true}, {"b", false}}, "transmission", 1.0, {}});

            Network n1 = build_network(whole);
            Network n2 = build_network(split);
            for (int i = 0; i < 20; ++i) {
                n2.edges[0].u[i] = n1.edges[0].u[i];
                n2.edges[1].u[i] = n1.edges[0].u[20 + i];
            }

            StepOptions opt;
            opt.order = K;
            opt.solver = solver_from_name(solver);
            Engine e1(std::move(n1), opt);
            Engine e2(std::move(n2), opt);
            for (int s = 0; s < 20; ++s) {
                const double dt = std::min(e1.compute_dt(0.9), e2.compute_dt(0.9));
                e1.step(dt);
                e2.step(dt);
            }
            const Edge& c = e1.network().edges[0];
            const Edge& a = e2.network().edges[0];
            const Edge& b = e2.network().edges[1];
            double worst = 0.0;
            for (int i = 0; i < 20; ++i)
                for (int comp = 0; comp < 2; ++comp) {
                    worst = std::max(worst, std::abs(c.u[i][comp] - a.u[i][comp]));
                    worst = std::max(worst, std::abs(c.u[20 + i][comp] - b.u[i][comp]));
                }
            INFO("solver=" << solver << " K=" << K);
            CHECK(worst <= 1e-12);
        }
    }
}

TEST_CASE("compute_dt follows the CFL formula") {
    NetworkConfig cfg;
    cfg.edges.push_back({"a", 5.0, 10, "swe", {"constant", {1.0}}, {}, {"constant", {0.0}}, {}});
    StepOptions opt;
    opt.order = 2;
    Engine eng(build_network(cfg), opt);
    const double expect = 0.95 * 0.5 / std::sqrt(9.81);
    CHECK(eng.compute_dt(0.95) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(eng.compute_dt(0.95) == doctest::Approx(0.15166).epsilon(1e-4));
    CHECK_THROWS_AS(eng.compute_dt(0.0), EngineError);

    NetworkConfig fine = cfg;
    fine.edges[0].cells = 20;
    Engine eng2(build_network(fine), opt);
    CHECK(eng2.compute_dt(0.95) == doctest::Approx(0.5 * expect).epsilon(1e-12));
}

TEST_CASE("discrete conservation on a closed network") {
    for (const char* solver : {"tt", "heoc"}) {
        NetworkConfig cfg = builtin_case("split-circle");
        set_grid(cfg, 30);
        cfg.run.order = 3;
        cfg.run.solver = solver;
        StepOptions opt;
        opt.order = 3;
        opt.solver = solver_from_name(solver);
        Engine eng(build_network(cfg), opt);
        const State before = eng.total_conserved();
        for (int s = 0; s < 50; ++s) eng.step();
        const State after = eng.total_conserved();
        CHECK(std::abs(after[0] - before[0]) <= 1e-11 * std::abs(before[0]));
    }
}

TEST_CASE("well-balanced: lake at rest over a bumpy bed stays at rest") {
    for (const char* bname : {"wb-b2", "wb-b3"}) {
        NetworkConfig cfg = builtin_case(bname);
        cfg.lump_edges.clear();  // full PDE everywhere for this check
        set_grid(cfg, 30);
        cfg.run.order = 3;
        StepOptions opt;
        opt.order = 3;
        opt.solver = SolverKind::tt;
        Engine eng(build_network(cfg), opt);
        for (int s = 0; s < 20; ++s) eng.step();
        for (const Edge& e : eng.network().edges)
            for (const State& u : e.u) CHECK(std::abs(u[1]) <= 1e-12);
        for (const Vertex& v : eng.network().verts)
            CHECK(std::abs(v.w[1]) <= 1e-12);
    }
}

TEST_CASE("adding a disconnected constant edge adds exactly its storage") {
    NetworkConfig cfg = builtin_case("split-circle");
    set_grid(cfg, 20);
    StepOptions opt;
    opt.order = 2;
    Engine base(build_network(cfg), opt);
    cfg.edges.push_back({"x", 4.0, 10, "swe", {"constant", {1.25}}, {}, {"constant", {0.0}}, {}});
    Engine more(build_network(cfg), opt);
    CHECK(more.total_conserved()[0] - base.total_conserved()[0] ==
          doctest::Approx(4.0 * 1.25).epsilon(1e-13));
}

TEST_CASE("smooth closed loop converges at order") {
    // single edge closed into a loop through a transmission vertex: EOC of
    // self-convergence against the agglomerated finer solution
    auto run = [&](int cells) {
        NetworkConfig cfg;
        cfg.edges.push_back({"c", 20.0, cells, "swe",
                             {"poly", {2.0, 0.0, 0.0}}, {}, {"constant", {0.0}}, {}});
        // smooth periodic bump via hermite with matching ends
        cfg.edges[0].h = {"hermite3", {2.0, 2.2, 2.0, 5.0}};
        cfg.verts.push_back({"v", {{"c", true}, {"c", false}}, "transmission", 1.0, {}});
        cfg.run.t_end = 0.5;
        cfg.run.order = 4;
        cfg.run.solver = "tt";
        cfg.run.ode_samples = 4;
        return simulate(cfg, true);
    };
    const SimResult r1 = run(40), r2 = run(80), r3 = run(160);
    const double e1 = pde_errors(r1.net, r3.net).l1_h;
    const double e2 = pde_errors(r2.net, r3.net).l1_h;
    // coarse-vs-fine self EOC, biased slightly low by the shared reference
    const double rate = std::log(e1 / e2) / std::log(2.0);
    CHECK(rate >= 3.7);
}

TEST_CASE("serial and parallel stepping produce identical states") {
    NetworkConfig cfg = builtin_case("split-circle");
    set_grid(cfg, 40);
    StepOptions opt;
    opt.order = 4;
    opt.solver = SolverKind::heoc;
    opt.parallel = false;
    Engine ser(build_network(cfg), opt);
    opt.parallel = true;
    Engine par(build_network(cfg), opt);
    for (int s = 0; s < 5; ++s) {
        ser.step();
        par.step();
    }
    for (std::size_t e = 0; e < ser.network().edges.size(); ++e)
        for (int i = 0; i < ser.network().edges[e].cells; ++i)
            for (int c = 0; c < 2; ++c)
                CHECK(ser.network().edges[e].u[i][c] == par.network().edges[e].u[i][c]);
}
