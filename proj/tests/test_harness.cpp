#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "swnet/harness.hpp"

using namespace swnet;

TEST_CASE("eoc arithmetic") {
    CHECK(eoc(1e-2, 1e-4, 1.0, 0.1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(eoc(8.0, 1.0, 2.0, 1.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(eoc(4e-3, 1e-3, 2.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("pde error norms") {
    NetworkConfig cfg;
    cfg.edges.push_back({"a", 4.0, 4, "swe", {"constant", {2.0}}, {}, {"constant", {0.0}}, {}});
    Network coarse = build_network(cfg);
    cfg.edges[0].cells = 8;
    Network fine = build_network(cfg);
    CHECK(pde_errors(coarse, fine).l1_h == doctest::Approx(0.0));
    // a single-cell depth deviation of e gives L1 = dx * e
    coarse.edges[0].u[2][0] += 0.25;
    const PdeErrors err = pde_errors(coarse, fine);
    CHECK(err.l1_h == doctest::Approx(1.0 * 0.25).epsilon(1e-14));
    CHECK(err.linf_h == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("ode trace norm: constant offset over [0, T]") {
    SimResult a, b;
    const double T = 2.0, delta = 0.3;
    for (int j = 0; j <= 10; ++j) {
        TraceSample sa, sb;
        sa.t = sb.t = T * j / 10;
        sa.vertex_w = {{1.0 + delta}};
        sb.vertex_w = {{1.0}};
        a.trace.push_back(sa);
        b.trace.push_back(sb);
    }
    CHECK(ode_l2(a, b) == doctest::Approx(delta * std::sqrt(T)).epsilon(1e-13));
}

TEST_CASE("hermite_init solves the endpoint constraint system") {
    const auto c = hermite_init(2.0, 3.0, 7);
    CHECK(c.size() == 16);  // degree 15
    auto eval = [&](double xi) {
        double acc = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * xi + c[k];
        return acc;
    };
    CHECK(eval(0.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(eval(1.0) == doctest::Approx(3.0).epsilon(1e-11));
    // residual of all constraints
    CHECK(polynomial_constraint_residual(c, hermite_constraints(2.0, 3.0, 7)) <= 1e-9);
    // symmetry about the midpoint up to the value offset
    for (double xi : {0.1, 0.25, 0.4}) {
        CHECK(std::abs(eval(xi) + eval(1.0 - xi) - 5.0) <= 1e-9);
    }
    // two constraints only: the linear interpolant
    const auto lin = hermite_init(1.0, 4.0, 0);
    CHECK(lin.size() == 2);
    CHECK(lin[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(lin[1] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("builtin cases carry the advertised data") {
    const auto names = builtin_case_names();
    CHECK(names.size() == 7);
    for (const std::string& n : names) CHECK_NOTHROW(builtin_case(n));
    CHECK_THROWS_AS(builtin_case("nope"), ConfigError);

    // split-circle depth endpoints
    {
        const Network net = build_network(builtin_case("split-circle"));
        CHECK(net.edges[0].u.front()[0] == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(net.edges[0].u.back()[0] == doctest::Approx(3.0).epsilon(1e-6));
    }
    // shock case levels
    {
        const NetworkConfig cfg = builtin_case("shock-circle");
        const Network net = build_network(cfg);
        CHECK(net.edges[net.edge_index("E3")].u[0][0] == 6.0);
        for (const char* id : {"E1", "E2", "E4"})
            CHECK(net.edges[net.edge_index(id)].u[0][0] == 5.0);
    }
    // tree Riemann datum on E1
    {
        NetworkConfig cfg = builtin_case("tree");
        const Network net = build_network(cfg);
        const Edge& e1 = net.edges[net.edge_index("E1")];
        CHECK(e1.u.front()[0] == 3.0);
        CHECK(e1.u.back()[0] == 2.0);
        // split at x = 18.5
        const int cell = static_cast<int>(18.5 / e1.dx);
        CHECK(e1.u[cell - 1][0] == 3.0);
        CHECK(e1.u[cell + 1][0] == 2.0);
    }
}

TEST_CASE("t_end = 0 returns the initial data") {
    NetworkConfig cfg = builtin_case("split-circle");
    set_grid(cfg, 20);
    cfg.run.t_end = 0.0;
    cfg.run.snapshots = {0.0};
    const SimResult res = simulate(cfg, true, true);
    CHECK(res.steps == 0);
    const Network init = build_network(cfg);
    for (int i = 0; i < 20; ++i)
        CHECK(res.net.edges[0].u[i][0] == init.edges[0].u[i][0]);
}

TEST_CASE("run outputs are deterministic byte-for-byte") {
    NetworkConfig cfg = builtin_case("split-circle");
    set_grid(cfg, 24);
    cfg.run.order = 2;
    cfg.run.t_end = 0.3;
    cfg.run.snapshots = {0.3};
    namespace fs = std::filesystem;
    const fs::path dir1 = fs::temp_directory_path() / "swnet_det_a";
    const fs::path dir2 = fs::temp_directory_path() / "swnet_det_b";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    const auto f1 = run_to_files(cfg, dir1.string());
    const auto f2 = run_to_files(cfg, dir2.string());
    REQUIRE(f1.size() == f2.size());
    REQUIRE(f1.size() >= 5);  // three edges + two vertex traces
    for (std::size_t i = 0; i < f1.size(); ++i) {
        std::ifstream a(f1[i]), b(f2[i]);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        CHECK(sa.str() == sb.str());
        CHECK(!sa.str().empty());
    }
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("set_grid scales cells by edge length") {
    NetworkConfig cfg = builtin_case("tree");
    set_grid(cfg, 50);
    for (const EdgeConfig& e : cfg.edges) {
        if (e.length == 25.0) CHECK(e.cells == 50);
        if (e.length == 2.5) CHECK(e.cells == 5);
    }
}
