#include "swnet/junction.hpp"

#include <cmath>
#include <sstream>

#include "swnet/ck.hpp"
#include "swnet/linalg.hpp"

namespace swnet {
namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::vector<Jet1> const_jets(const std::vector<double>& w, int len) {
    std::vector<Jet1> j;
    j.reserve(w.size());
    for (double v : w) j.push_back(Jet1::constant(v, len));
    return j;
}

std::vector<JetState> const_jet_states(const std::vector<State>& u, int len) {
    std::vector<JetState> j(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        j[i] = {Jet1::constant(u[i][0], len), Jet1::constant(u[i][1], len)};
    return j;
}

/// Directional derivative of Phi in the state of edge `i`: first-order jet
/// propagation with seed direction `dir`.
std::vector<double> phi_dir_deriv(const CouplingSpec& spec, const std::vector<State>& u,
                                  const std::vector<double>& w, std::size_t i,
                                  const State& dir) {
    std::vector<JetState> ju = const_jet_states(u, 2);
    ju[i][0][1] = dir[0];
    ju[i][1][1] = dir[1];
    const std::vector<Jet1> out = spec.phi_jet(ju, const_jets(w, 2));
    std::vector<double> col(out.size());
    for (std::size_t r = 0; r < out.size(); ++r) col[r] = out[r][1];
    return col;
}

void check_dimensions(const std::vector<const Model*>& models, const std::vector<State>& ur,
                      const std::vector<double>& w0, const CouplingSpec& spec) {
    const int n = static_cast<int>(ur.size());
    if (n != spec.n || static_cast<int>(models.size()) != n)
        throw JunctionError("junction: edge count does not match coupling spec");
    if (static_cast<int>(w0.size()) != spec.l)
        throw JunctionError("junction: ODE state dimension does not match coupling spec");
    // Eq.-(5)-type count: total positive-eigenvalue count must equal the
    // number of algebraic conditions.
    int ci_sum = 0;
    for (int i = 0; i < n; ++i) {
        const EigenDecomp e = models[i]->eigen(ur[i]);
        if (e.positive != 1) {
            std::ostringstream os;
            os << "junction edge " << i << ": state (" << ur[i][0] << ", " << ur[i][1]
               << ") left the subcritical regime (c=" << e.positive << ")";
            throw JunctionStateLeftSubcritical(os.str());
        }
        ci_sum += e.positive;
    }
    if (ci_sum != spec.c)
        throw JunctionError("junction: sum of positive eigenvalue counts != condition count");
}

}  // namespace

Mat coupling_condition_matrix(const std::vector<const Model*>& models,
                              const std::vector<State>& ug, const std::vector<double>& w,
                              const CouplingSpec& spec) {
    const std::size_t n = ug.size();
    Mat a(spec.c, n);
    for (std::size_t i = 0; i < n; ++i) {
        const Mat r = models[i]->linear_lax_basis(ug[i]);
        const std::vector<double> col = phi_dir_deriv(spec, ug, w, i, {r(0, 0), r(1, 0)});
        for (int rr = 0; rr < spec.c; ++rr) a(rr, i) = col[rr];
    }
    return a;
}

ClassicalResult solve_classical(const std::vector<const Model*>& models,
                                const std::vector<State>& ur, const std::vector<double>& w0,
                                const CouplingSpec& spec, const NewtonOptions& opt) {
    check_dimensions(models, ur, w0, spec);
    const std::size_t n = ur.size();

    std::vector<double> xi(n);
    for (std::size_t i = 0; i < n; ++i) xi[i] = ur[i][0];  // anchor at the right states

    std::vector<State> ug(n);
    auto states_of = [&](const std::vector<double>& p) {
        std::vector<State> s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = models[i]->lax_curve(p[i], ur[i]);
        return s;
    };

    ug = states_of(xi);
    std::vector<double> res = spec.phi(ug, w0);
    double rn = inf_norm(res);
    int iter = 0;
    while (rn > opt.tol) {
        if (++iter > opt.max_iter) {
            std::ostringstream os;
            os << "junction (" << spec.name << "): Newton failed to converge, |Phi|=" << rn;
            throw JunctionNoConvergence(os.str());
        }
        Mat jac(spec.c, n);
        for (std::size_t i = 0; i < n; ++i) {
            const State dl = models[i]->lax_curve_dxi(xi[i], ur[i]);
            const std::vector<double> col = phi_dir_deriv(spec, ug, w0, i, dl);
            for (int r = 0; r < spec.c; ++r) jac(r, i) = col[r];
        }
        std::vector<double> step;
        try {
            std::vector<double> rhs(res);
            for (double& v : rhs) v = -v;
            step = Lu(jac).solve(rhs);
        } catch (const SingularMatrixError&) {
            throw JunctionSingularCoupling("junction (" + spec.name +
                                           "): singular coupling Jacobian in Newton step");
        }
        // plain Newton with a halving fallback on residual increase or on
        // leaving the admissible set
        double lambda = 1.0;
        int halvings = 0;
        for (;;) {
            std::vector<double> cand(n);
            bool ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                cand[i] = xi[i] + lambda * step[i];
                if (!(cand[i] > 0.0) && models[i]->name() == "swe") ok = false;
            }
            std::vector<State> ugc;
            std::vector<double> resc;
            double rnc = 0.0;
            if (ok) {
                try {
                    ugc = states_of(cand);
                    resc = spec.phi(ugc, w0);
                    rnc = inf_norm(resc);
                } catch (const std::runtime_error&) {
                    ok = false;
                }
            }
            if (ok && (rnc < rn || rnc <= opt.tol)) {
                xi = cand;
                ug = std::move(ugc);
                res = std::move(resc);
                rn = rnc;
                break;
            }
            if (++halvings > opt.max_halvings) {
                std::ostringstream os;
                os << "junction (" << spec.name << "): line search stalled at |Phi|=" << rn
                   << " (the data may not admit a subcritical solution)";
                throw JunctionNoConvergence(os.str());
            }
            lambda *= 0.5;
        }
    }

    // a-posteriori checks: subcritical regime and the well-posedness matrix
    for (std::size_t i = 0; i < n; ++i) {
        const EigenDecomp e = models[i]->eigen(ug[i]);
        if (e.positive != 1)
            throw JunctionStateLeftSubcritical(
                "junction (" + spec.name + "): Godunov state left the subcritical regime");
    }
    try {
        Lu check(coupling_condition_matrix(models, ug, w0, spec));
        (void)check;
    } catch (const SingularMatrixError&) {
        throw JunctionSingularCoupling("junction (" + spec.name +
                                       "): well-posedness matrix singular at the solution");
    }
    return {std::move(ug), iter};
}

TTResult solve_tt(const std::vector<const Model*>& models, const std::vector<SpatialJet>& sjets,
                  const std::vector<double>& w0, const CouplingSpec& spec, int K, double dt,
                  const std::vector<const BiSeries*>& bottom_slope, const NewtonOptions& opt) {
    const std::size_t n = sjets.size();
    std::vector<State> ur(n);
    for (std::size_t i = 0; i < n; ++i) ur[i] = sjets[i].value();

    TTResult out;
    ClassicalResult cls = solve_classical(models, ur, w0, spec, opt);
    out.iters = cls.iters;

    // CK on the basis of the zeroth-order Godunov states; this is what makes
    // the cascade reduce to the classical single-interface solver for
    // pass-through couplings.
    std::vector<TimeJet> tr(n);
    for (std::size_t i = 0; i < n; ++i) {
        SpatialJet sj = sjets[i];
        sj.d[0][0] = cls.godunov[i][0];
        sj.d[1][0] = cls.godunov[i][1];
        tr[i] = ck_transform(sj, *models[i],
                             i < bottom_slope.size() ? bottom_slope[i] : nullptr, K);
    }

    out.godunov.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.godunov[i].len = K;
        out.godunov[i].d[0][0] = cls.godunov[i][0];
        out.godunov[i].d[1][0] = cls.godunov[i][1];
    }

    const int jl = K + 1;  // jet length carried through Phi/F propagation
    std::vector<JetState> gj = const_jet_states(cls.godunov, jl);
    std::vector<Jet1> wj = const_jets(w0, jl);

    if (K > 1 || spec.l > 0) {
        // positive-family eigenvectors and the derivative-condition matrix,
        // both frozen at the zeroth-order Godunov states
        std::vector<State> rp(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Mat r = models[i]->linear_lax_basis(cls.godunov[i]);
            rp[i] = {r(0, 0), r(1, 0)};
        }
        Mat amat = coupling_condition_matrix(models, cls.godunov, w0, spec);
        Lu alu = [&]() {
            try {
                return Lu(amat);
            } catch (const SingularMatrixError&) {
                throw JunctionSingularDerivativeSystem(
                    "junction (" + spec.name + "): derivative-condition matrix singular");
            }
        }();

        double fact = 1.0;  // k!
        for (int k = 1; k < K; ++k) {
            fact *= k;
            // ODE coefficient k by integrating the propagated right-hand side
            if (spec.l > 0) {
                const std::vector<Jet1> f = spec.rhs_jet(gj, wj);
                for (int q = 0; q < spec.l; ++q) wj[q][k] = f[q][k - 1] / k;
            }
            // k-th derivative of Phi with the unknown Godunov coefficient
            // replaced by the trace coefficient: yields grad_u Phi d_t^k u_r
            // + Psi_k in one propagation (the equation is linear there)
            for (std::size_t i = 0; i < n; ++i) {
                gj[i][0][k] = tr[i].d[0][k] / fact;
                gj[i][1][k] = tr[i].d[1][k] / fact;
            }
            const std::vector<Jet1> phik = spec.phi_jet(gj, wj);
            std::vector<double> rhs(spec.c);
            for (int r = 0; r < spec.c; ++r) rhs[r] = -phik[r][k] * fact;
            const std::vector<double> xik = alu.solve(rhs);
            for (std::size_t i = 0; i < n; ++i) {
                out.godunov[i].d[0][k] = tr[i].d[0][k] + rp[i][0] * xik[i];
                out.godunov[i].d[1][k] = tr[i].d[1][k] + rp[i][1] * xik[i];
                gj[i][0][k] = out.godunov[i].d[0][k] / fact;
                gj[i][1][k] = out.godunov[i].d[1][k] / fact;
            }
        }
        // closing ODE coefficient: the Taylor update must use exactly the
        // flux-consistent jet for conservation, hence order K inclusive
        if (spec.l > 0) {
            const std::vector<Jet1> f = spec.rhs_jet(gj, wj);
            for (int q = 0; q < spec.l; ++q) wj[q][K] = f[q][K - 1] / K;
        }
    }

    if (spec.l > 0) {
        out.w_jet = wj;
        out.w_new.resize(spec.l);
        for (int q = 0; q < spec.l; ++q) out.w_new[q] = wj[q].eval(dt);
    }

    out.flux_avg.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const JetState f = models[i]->flux(JetState{out.godunov[i].component(0, K),
                                                    out.godunov[i].component(1, K)});
        out.flux_avg[i] = {f[0].mean(dt), f[1].mean(dt)};
    }
    return out;
}

HeocResult solve_heoc(const std::vector<const Model*>& models,
                      const std::vector<SpatialJet>& sjets, const std::vector<double>& w0,
                      const CouplingSpec& spec, int K, double dt, const ButcherTableau& tab,
                      const std::vector<const BiSeries*>& bottom_slope,
                      const NewtonOptions& opt) {
    const std::size_t n = sjets.size();
    std::vector<State> ur(n);
    for (std::size_t i = 0; i < n; ++i) ur[i] = sjets[i].value();

    HeocResult out;
    ClassicalResult cls = solve_classical(models, ur, w0, spec, opt);
    out.iters = cls.iters;

    out.trace.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        SpatialJet sj = sjets[i];
        sj.d[0][0] = cls.godunov[i][0];
        sj.d[1][0] = cls.godunov[i][1];
        out.trace[i] = ck_transform(sj, *models[i],
                                    i < bottom_slope.size() ? bottom_slope[i] : nullptr, K);
    }

    const int s = tab.stages;
    out.stage_godunov.resize(s);
    out.stage_w.assign(s, w0);
    std::vector<std::vector<double>> slopes(s, std::vector<double>(spec.l, 0.0));

    for (int l = 0; l < s; ++l) {
        std::vector<double> wl = w0;
        for (int j = 0; j < l; ++j)
            for (int q = 0; q < spec.l; ++q) wl[q] += dt * tab.a[l][j] * slopes[j][q];
        out.stage_w[l] = wl;

        std::vector<State> anchors(n);
        for (std::size_t i = 0; i < n; ++i) anchors[i] = out.trace[i].eval(tab.c[l] * dt);
        try {
            ClassicalResult st = solve_classical(models, anchors, wl, spec, opt);
            out.iters += st.iters;
            out.stage_godunov[l] = std::move(st.godunov);
        } catch (const JunctionError& e) {
            throw JunctionError("stage " + std::to_string(l + 1) + ": " + e.what());
        }
        if (spec.l > 0) slopes[l] = spec.rhs(out.stage_godunov[l], wl);
    }

    out.w_new = w0;
    for (int l = 0; l < s; ++l)
        for (int q = 0; q < spec.l; ++q) out.w_new[q] += dt * tab.b[l] * slopes[l][q];

    out.flux_avg.assign(n, State{0.0, 0.0});
    for (int l = 0; l < s; ++l)
        for (std::size_t i = 0; i < n; ++i) {
            const State f = models[i]->flux(out.stage_godunov[l][i]);
            out.flux_avg[i][0] += tab.b[l] * f[0];
            out.flux_avg[i][1] += tab.b[l] * f[1];
        }
    return out;
}

}  // namespace swnet
