#include <doctest.h>

#include <cmath>

#include "swnet/engine.hpp"
#include "swnet/harness.hpp"
#include "swnet/lpm.hpp"

using namespace swnet;

TEST_CASE("hydrostatic reconstruction formula") {
    CHECK(hydrostatic_reconstruct(State{3.0, 0.4}, 0.2, 0.2) == State{3.0, 0.4});
    const State r = hydrostatic_reconstruct(State{3.0, 0.4}, 0.0, 0.3);
    CHECK(r[0] == doctest::Approx(2.7).epsilon(1e-15));
    CHECK(r[1] == 0.4);
    // deeper neighbour level does not add water
    CHECK(hydrostatic_reconstruct(State{3.0, 0.0}, 0.5, 0.1)[0] == 3.0);
}

TEST_CASE("lumping the diamond gives a 14-component composite") {
    NetworkConfig cfg = builtin_case("diamond-lpm");
    Network net = build_network(cfg);
    std::vector<int> ids;
    for (const std::string& id : cfg.lump_edges) ids.push_back(net.edge_index(id));
    const LumpedRegion region = lump_region(net, ids);
    CHECK(region.dim() == 14);  // 5 edges x 2 + 2 manholes x 2
    CHECK(region.pde_slots == 2);
    CHECK(region.edges.size() == 5);
    CHECK(region.verts.size() == 4);
}

TEST_CASE("lumping a constant edge keeps the constant; flat bottoms need no correction") {
    NetworkConfig cfg;
    cfg.edges.push_back({"a", 10.0, 10, "swe", {"constant", {1.75}}, {}, {"constant", {0.25}}, {}});
    cfg.edges.push_back({"b", 10.0, 10, "swe", {"constant", {1.75}}, {}, {"constant", {0.25}}, {}});
    cfg.verts.push_back({"v", {{"a", true}, {"b", false}}, "equal-heights", 1.0, {}});
    cfg.verts.push_back({"w", {{"b", true}, {"a", false}}, "equal-heights", 1.0, {}});
    Network net = build_network(cfg);
    const LumpedRegion region = lump_region(net, {0});
    CHECK(region.w[0] == doctest::Approx(1.75).epsilon(1e-14));
    CHECK(region.w[1] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("lump_region rejects disconnected or dangling selections") {
    NetworkConfig cfg = builtin_case("diamond-lpm");
    Network net = build_network(cfg);
    // E2 and E6 do not share a vertex
    CHECK_THROWS_AS(lump_region(net, {net.edge_index("E2"), net.edge_index("E6")}), LpmError);

    NetworkConfig open;
    open.edges.push_back({"a", 5.0, 8, "swe", {"constant", {1.0}}, {}, {"constant", {0.0}}, {}});
    Network net2 = build_network(open);
    CHECK_THROWS_AS(lump_region(net2, {0}), LpmError);
}

TEST_CASE("composite dimension bookkeeping on sub-selections") {
    NetworkConfig cfg = builtin_case("diamond-lpm");
    Network net = build_network(cfg);
    // single edge E4 between V4 and V3: 1 edge x 2 + V3 manhole x 2 = 4
    const LumpedRegion r1 = lump_region(net, {net.edge_index("E4")});
    CHECK(r1.dim() == 4);
    // E2 between V3 and V1: both manholes join: 2 + 2 + 2 = 6
    const LumpedRegion r2 = lump_region(net, {net.edge_index("E2")});
    CHECK(r2.dim() == 6);
}

TEST_CASE("lake at rest stays at rest in the lumped components") {
    for (const char* name : {"wb-b2", "wb-b3"}) {
        NetworkConfig cfg = builtin_case(name);
        set_grid(cfg, 30);
        cfg.run.order = 3;
        StepOptions opt;
        opt.order = 3;
        opt.solver = SolverKind::heoc;
        Engine eng(build_network(cfg), opt);
        eng.lump(cfg.lump_edges);
        const std::vector<double> w0 = eng.region()->w;
        for (int s = 0; s < 15; ++s) eng.step();
        const std::vector<double>& w1 = eng.region()->w;
        for (std::size_t q = 0; q < w0.size(); ++q)
            CHECK(std::abs(w1[q] - w0[q]) <= 1e-12);
        // live edges stay at rest too
        for (const Edge& e : eng.network().edges) {
            if (e.lumped) continue;
            for (const State& u : e.u) CHECK(std::abs(u[1]) <= 1e-12);
        }
    }
}

TEST_CASE("symmetric tanks around a lumped edge give zero net flux") {
    // live bump -- tank V1 -- lumped edge -- tank V2 -- live bump (mirrored):
    // by symmetry the lumped discharge stays zero
    NetworkConfig cfg;
    cfg.edges.push_back({"l", 25.0, 30, "swe", {"hermite", {2.0, 2.2, 4.0}}, {},
                         {"constant", {0.0}}, {}});
    cfg.edges.push_back({"m", 25.0, 30, "swe", {"constant", {2.2}}, {}, {"constant", {0.0}}, {}});
    cfg.edges.push_back({"r", 25.0, 30, "swe", {"hermite", {2.2, 2.0, 4.0}}, {},
                         {"constant", {0.0}}, {}});
    cfg.verts.push_back({"V1", {{"l", true}, {"m", false}}, "manhole", 1.0, {2.2, 0.0}});
    cfg.verts.push_back({"V2", {{"m", true}, {"r", false}}, "manhole", 1.0, {2.2, 0.0}});
    StepOptions opt;
    opt.order = 3;
    opt.solver = SolverKind::heoc;
    Engine eng(build_network(cfg), opt);
    eng.lump({"m"});
    for (int s = 0; s < 20; ++s) eng.step();
    CHECK(std::abs(eng.region()->w[1]) <= 1e-11);
}

TEST_CASE("mass is conserved through a lumped region") {
    NetworkConfig cfg = builtin_case("diamond-lpm");
    set_grid(cfg, 30);
    cfg.run.order = 3;
    StepOptions opt;
    opt.order = 3;
    opt.solver = SolverKind::heoc;
    Engine eng(build_network(cfg), opt);
    eng.lump(cfg.lump_edges);
    const double before = eng.total_conserved()[0];
    for (int s = 0; s < 40; ++s) eng.step();
    const double after = eng.total_conserved()[0];
    CHECK(std::abs(after - before) <= 1e-10 * std::abs(before));
}
