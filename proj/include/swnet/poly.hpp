#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "swnet/jets.hpp"

namespace swnet {

/// Smooth profile over [0, L] stored as a Chebyshev series. Used for bottom
/// elevations and polynomial initial data, where monomial bases at the
/// degrees involved (up to ~24) would lose too much precision.
class ChebProfile {
public:
    ChebProfile() = default;

    /// Interpolate f at Chebyshev-Lobatto points of [0, L], degree deg.
    static ChebProfile fit(const std::function<double(double)>& f, int deg, double length);

    /// From monomial coefficients in the scaled variable xi = x / L:
    /// p(x) = sum c_k xi^k.
    static ChebProfile from_scaled_monomials(const std::vector<double>& c, double length);

    bool empty() const { return coef_.empty(); }
    double length() const { return length_; }
    int degree() const { return coef_.empty() ? -1 : static_cast<int>(coef_.size()) - 1; }

    double operator()(double x) const { return eval_series(coef_, x); }
    double deriv(double x) const;

    /// Antiderivative value with F(0) = 0; cell averages etc. come from
    /// differences of this, which keeps quadrature of the profile exact.
    double antideriv(double x) const;

    double mean(double a, double b) const { return (antideriv(b) - antideriv(a)) / (b - a); }

    /// Raw derivatives d^l b / dx^l for l = 0..len-1 at x.
    std::array<double, kMaxJet> deriv_jet(double x, int len) const;

    /// Derivative profile as x-series around x0, normalized Taylor
    /// coefficients, truncated to `len` (for the Cauchy-Kowalevsky source).
    BiSeries slope_series(double x0, int len, double direction = 1.0) const;

private:
    double eval_series(const std::vector<double>& c, double x) const;
    void ensure_derivs(int upto) const;

    double length_ = 1.0;
    std::vector<double> coef_;                          // Chebyshev on [0, L]
    mutable std::vector<std::vector<double>> derivs_;   // cached derivative series
};

inline double ChebProfile::eval_series(const std::vector<double>& c, double x) const {
    if (c.empty()) return 0.0;
    const double t = 2.0 * x / length_ - 1.0;  // map to [-1, 1]
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) {
        const double b0 = 2.0 * t * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c[0];
}

inline ChebProfile ChebProfile::fit(const std::function<double(double)>& f, int deg,
                                    double length) {
    ChebProfile p;
    p.length_ = length;
    const int n = deg + 1;
    std::vector<double> fv(n);
    for (int j = 0; j < n; ++j) {
        const double t = std::cos(M_PI * (j + 0.5) / n);  // Chebyshev-Gauss points
        fv[j] = f(0.5 * (t + 1.0) * length);
    }
    p.coef_.assign(n, 0.0);
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += fv[j] * std::cos(M_PI * k * (j + 0.5) / n);
        p.coef_[k] = 2.0 * s / n;
    }
    p.coef_[0] *= 0.5;
    return p;
}

inline ChebProfile ChebProfile::from_scaled_monomials(const std::vector<double>& c,
                                                      double length) {
    return fit(
        [&c, length](double x) {
            const double xi = x / length;
            double acc = 0.0;
            for (std::size_t k = c.size(); k-- > 0;) acc = acc * xi + c[k];
            return acc;
        },
        static_cast<int>(c.size()) - 1, length);
}

inline void ChebProfile::ensure_derivs(int upto) const {
    if (static_cast<int>(derivs_.size()) > upto) return;
    if (derivs_.empty()) derivs_.push_back(coef_);
    while (static_cast<int>(derivs_.size()) <= upto) {
        const std::vector<double>& c = derivs_.back();
        const int n = static_cast<int>(c.size());
        std::vector<double> d(std::max(n - 1, 1), 0.0);
        if (n >= 2) {
            // dT recurrence in t, then chain rule dt/dx = 2/L
            d[n - 2] = 2.0 * (n - 1) * c[n - 1];
            if (n >= 3) d[n - 3] = 2.0 * (n - 2) * c[n - 2];
            for (int k = n - 4; k >= 0; --k) d[k] = d[k + 2] + 2.0 * (k + 1) * c[k + 1];
            d[0] *= 0.5;
            const double scale = 2.0 / length_;
            for (double& v : d) v *= scale;
        }
        derivs_.push_back(std::move(d));
    }
}

inline double ChebProfile::deriv(double x) const {
    if (coef_.empty()) return 0.0;
    ensure_derivs(1);
    return eval_series(derivs_[1], x);
}

inline double ChebProfile::antideriv(double x) const {
    if (coef_.empty()) return 0.0;
    const int n = static_cast<int>(coef_.size());
    std::vector<double> a(n + 1, 0.0);
    for (int k = 2; k < n - 1; ++k) a[k] = (coef_[k - 1] - coef_[k + 1]) / (2.0 * k);
    if (n >= 3) a[n - 1] = coef_[n - 2] / (2.0 * (n - 1));
    if (n >= 2) a[n] = coef_[n - 1] / (2.0 * n);
    // coef_[0] stores the true constant (not the doubled convention)
    a[1] = coef_[0] - (n > 2 ? 0.5 * coef_[2] : 0.0);
    // chain rule: integral in x adds factor L/2
    for (double& v : a) v *= 0.5 * length_;
    const double at_x = eval_series(a, x);
    const double at_0 = eval_series(a, 0.0);
    return at_x - at_0;
}

inline std::array<double, kMaxJet> ChebProfile::deriv_jet(double x, int len) const {
    std::array<double, kMaxJet> out{};
    if (coef_.empty()) return out;
    ensure_derivs(len - 1);
    for (int l = 0; l < len; ++l) out[l] = eval_series(derivs_[l], x);
    return out;
}

inline BiSeries ChebProfile::slope_series(double x0, int len, double direction) const {
    BiSeries s(len);
    if (coef_.empty()) return s;
    ensure_derivs(len);
    double fact = 1.0;
    for (int b = 0; b < len; ++b) {
        if (b > 0) fact *= b;
        // l-th x-derivative of b'(x) at x0, mirrored when direction = -1:
        // d/dx' [b(x0 - x')] picks up (-1)^(b+1)
        const double sgn = direction > 0 ? 1.0 : ((b % 2 == 0) ? -1.0 : 1.0);
        s.at(0, b) = sgn * eval_series(derivs_[b + 1], x0) / fact;
    }
    return s;
}

}  // namespace swnet
