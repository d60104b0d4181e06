#pragma once

#include "swnet/jets.hpp"
#include "swnet/model.hpp"

namespace swnet {

/// Cauchy-Kowalevsky / Lax-Wendroff expansion: fills the bivariate (t, x)
/// solution series from a spatial derivative jet by substituting
/// dt u = -dx f(u) + S repeatedly. `bottom_slope` is the x-series of db/dx at
/// the anchor (nullptr for flat bottom). Truncation: total degree < K.
inline BiState ck_expand(const SpatialJet& sjet, const Model& model,
                         const BiSeries* bottom_slope, int K) {
    BiState u{BiSeries(K), BiSeries(K)};
    double fact = 1.0;
    const int nb = std::min(K, sjet.len);
    for (int b = 0; b < nb; ++b) {
        if (b > 0) fact *= b;
        u[0].at(0, b) = sjet.d[0][b] / fact;
        u[1].at(0, b) = sjet.d[1][b] / fact;
    }
    model.require_admissible({u[0].at(0, 0), u[1].at(0, 0)});
    for (int a = 0; a + 1 < K; ++a) {
        const BiState f = model.flux(u);
        BiState s;
        if (bottom_slope) s = model.bottom_source(u, *bottom_slope);
        for (int comp = 0; comp < 2; ++comp)
            for (int b = 0; a + 1 + b < K; ++b) {
                double v = -(b + 1) * f[comp].at(a, b + 1);
                if (bottom_slope) v += s[comp].at(a, b);
                u[comp].at(a + 1, b) = v / (a + 1);
            }
    }
    return u;
}

inline TimeJet time_jet_of(const BiState& u) {
    TimeJet t;
    t.len = u[0].size();
    double fact = 1.0;
    for (int a = 0; a < t.len; ++a) {
        if (a > 0) fact *= a;
        t.d[0][a] = u[0].at(a, 0) * fact;
        t.d[1][a] = u[1].at(a, 0) * fact;
    }
    return t;
}

/// Pure time derivatives of the boundary trace implied by a spatial jet.
inline TimeJet ck_transform(const SpatialJet& sjet, const Model& model,
                            const BiSeries* bottom_slope, int K) {
    return time_jet_of(ck_expand(sjet, model, bottom_slope, K));
}

}  // namespace swnet
