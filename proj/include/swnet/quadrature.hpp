#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace swnet {

/// Gauss-Legendre nodes/weights on [-1, 1], computed once per point count by
/// Newton iteration on the Legendre recurrence.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;

    static const GaussRule& get(int n);

    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * f(mid + half * x[i]);
        return acc * half;
    }
};

inline GaussRule make_gauss(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess, Newton refinement
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.x[n - 1 - i] = x;
        r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

inline const GaussRule& GaussRule::get(int n) {
    // magic-static: built once, safe to query from parallel loops afterwards
    static const std::array<GaussRule, 33> cache = [] {
        std::array<GaussRule, 33> c;
        for (int k = 1; k <= 32; ++k) c[k] = make_gauss(k);
        return c;
    }();
    if (n < 1) n = 1;
    if (n > 32) n = 32;
    return cache[n];
}

}  // namespace swnet
