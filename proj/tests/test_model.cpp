#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle_riemann.hpp"
#include "swnet/model.hpp"

using namespace swnet;

namespace {
const ShallowWater swe;
constexpr double g = 9.81;
}  // namespace

TEST_CASE("swe flux values") {
    const State f1 = swe.flux(State{2.0, 0.0});
    CHECK(f1[0] == 0.0);
    CHECK(f1[1] == doctest::Approx(19.62).epsilon(1e-14));  // g/2 * 4
    const State f2 = swe.flux(State{1.0, 1.0});
    CHECK(f2[0] == 1.0);
    CHECK(f2[1] == doctest::Approx(1.0 + 4.905).epsilon(1e-14));
    CHECK(swe.flux(State{3.7, 0.0})[0] == 0.0);
    CHECK_THROWS_AS(swe.require_admissible(State{-1.0, 0.0}), InadmissibleStateError);
}

TEST_CASE("swe flux reflection symmetry") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dh(0.3, 4.0), dq(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const State u{dh(rng), dq(rng)};
        const State f = swe.flux(u);
        const State fr = swe.flux(swe.reflect(u));
        CHECK(fr[0] == doctest::Approx(-f[0]).epsilon(1e-15));
        CHECK(fr[1] == doctest::Approx(f[1]).epsilon(1e-15));
    }
}

TEST_CASE("swe eigenstructure") {
    const EigenDecomp e = swe.eigen(State{1.0, 0.0});
    CHECK(e.lambda[0] == doctest::Approx(-std::sqrt(g)).epsilon(1e-15));
    CHECK(e.lambda[1] == doctest::Approx(std::sqrt(g)).epsilon(1e-15));
    CHECK(e.lambda[1] == doctest::Approx(3.1321).epsilon(1e-4));
    CHECK(e.positive == 1);

    // defining property grad(f) r = lambda r, with the Jacobian from central
    // finite differences of the flux
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dh(0.3, 4.0);
    for (int t = 0; t < 25; ++t) {
        const double h = dh(rng);
        std::uniform_real_distribution<double> dv(-0.5 * std::sqrt(g * h), 0.5 * std::sqrt(g * h));
        const State u{h, h * dv(rng)};
        const EigenDecomp ed = swe.eigen(u);
        const double eps = 1e-7;
        for (int j = 0; j < 2; ++j) {
            const State r{ed.rvec(0, j), ed.rvec(1, j)};
            State up{u[0] + eps * r[0], u[1] + eps * r[1]};
            State um{u[0] - eps * r[0], u[1] - eps * r[1]};
            const State df = (1.0 / (2 * eps)) * (swe.flux(up) - swe.flux(um));
            CHECK(df[0] == doctest::Approx(ed.lambda[j] * r[0]).epsilon(1e-6));
            CHECK(df[1] == doctest::Approx(ed.lambda[j] * r[1]).epsilon(1e-6));
        }
        // analytic Jacobian column check to tight tolerance:
        // grad f = [[0, 1], [gh - v^2, 2v]]
        const double v = u[1] / u[0];
        for (int j = 0; j < 2; ++j) {
            const State r{ed.rvec(0, j), ed.rvec(1, j)};
            const double a0 = r[1];
            const double a1 = (g * u[0] - v * v) * r[0] + 2 * v * r[1];
            CHECK(std::abs(a0 - ed.lambda[j] * r[0]) <= 1e-11 * (1 + std::abs(a0)));
            CHECK(std::abs(a1 - ed.lambda[j] * r[1]) <= 1e-11 * (1 + std::abs(a1)));
        }
    }

    CHECK(swe.eigen(State{1.0, 10.0}).positive == 2);  // supercritical
    // near-sonic rejection
    const double hs = 1.0;
    CHECK_THROWS_AS(swe.eigen(State{hs, -hs * std::sqrt(g * hs) + 1e-10}), NearSonicError);
}

TEST_CASE("lax curve passes through its anchor and matches the oracle") {
    const State ur{1.0, 0.0};
    const State at_anchor = swe.lax_curve(1.0, ur);
    CHECK(at_anchor[0] == 1.0);
    CHECK(at_anchor[1] == doctest::Approx(0.0).epsilon(1e-15));

    // shock branch: a state on the outgoing curve of u_r is the middle state
    // of the Riemann problem between itself and u_r
    const State ug = swe.lax_curve(1.5, ur);
    const auto mid = oracle::solve(ug[0], ug[1] / ug[0], ur[0], ur[1] / ur[0]);
    CHECK(mid.h == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(mid.v * mid.h == doctest::Approx(ug[1]).epsilon(1e-11));

    // rarefaction branch likewise
    const State ug2 = swe.lax_curve(0.7, ur);
    const auto mid2 = oracle::solve(ug2[0], ug2[1] / ug2[0], ur[0], ur[1] / ur[0]);
    CHECK(mid2.h == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(mid2.v * mid2.h == doctest::Approx(ug2[1]).epsilon(1e-11));

    CHECK_THROWS_AS(swe.lax_curve(-0.1, ur), InadmissibleStateError);
}

TEST_CASE("lax curve branch seam is C1") {
    const State ur{1.3, 0.4};
    const double eps = 1e-6;
    const State a = swe.lax_curve(ur[0] - eps, ur);
    const State b = swe.lax_curve(ur[0] + eps, ur);
    CHECK(std::abs(a[1] - b[1]) < 2e-5);  // value continuous
    // one-sided slopes agree to 1e-6 under central differences
    const State a2 = swe.lax_curve(ur[0] - 2 * eps, ur);
    const State b2 = swe.lax_curve(ur[0] + 2 * eps, ur);
    const double dminus = (a[1] - a2[1]) / eps;
    const double dplus = (b2[1] - b[1]) / eps;
    CHECK(dminus == doctest::Approx(dplus).epsilon(1e-5));
}

TEST_CASE("lax curve jacobian matches finite differences") {
    const State ur{1.0, 0.0};
    CHECK(swe.lax_curve_dxi(1.0, ur)[0] == 1.0);  // parametrized by depth
    for (double xi : {1.2, 0.8}) {
        const double eps = 1e-6;
        const State p = swe.lax_curve(xi + eps, ur);
        const State m = swe.lax_curve(xi - eps, ur);
        const State d = swe.lax_curve_dxi(xi, ur);
        CHECK(d[1] == doctest::Approx((p[1] - m[1]) / (2 * eps)).epsilon(1e-7));
    }
}

TEST_CASE("linear lax basis") {
    const Mat r = swe.linear_lax_basis(State{1.0, 0.0});
    CHECK(r.cols() == 1);
    CHECK(r(0, 0) == 1.0);
    CHECK(r(1, 0) == doctest::Approx(std::sqrt(g)).epsilon(1e-14));
}

TEST_CASE("bottom source and hydraulic head") {
    CHECK(swe.bottom_source(State{2.0, 1.0}, 0.0)[1] == 0.0);
    CHECK(swe.bottom_source(State{3.0, 0.0}, 0.012)[1] == doctest::Approx(-0.35316).epsilon(1e-13));
    // positive slope decelerates rightward flow
    CHECK(swe.bottom_source(State{1.0, 1.0}, 0.1)[1] < 0.0);

    CHECK(swe.hydraulic_head(State{2.0, 0.0}) == 2.0);
    CHECK(swe.hydraulic_head(State{1.0, 1.0}) == doctest::Approx(1.0 + 1.0 / (2 * g)).epsilon(1e-14));
}

TEST_CASE("linear wave model") {
    const LinearWave lw(2.0);
    const EigenDecomp e = lw.eigen(State{0.0, 0.0});
    CHECK(e.lambda[0] == -2.0);
    CHECK(e.lambda[1] == 2.0);
    CHECK(e.positive == 1);
    const State f = lw.flux(State{1.0, 3.0});
    CHECK(f[0] == 6.0);
    CHECK(f[1] == 2.0);
    const State ug = lw.lax_curve(1.5, State{1.0, 0.5});
    CHECK(ug[0] == 1.5);
    CHECK(ug[1] == doctest::Approx(1.0));
}
