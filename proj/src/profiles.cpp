#include "swnet/profiles.hpp"

#include <cmath>
#include <stdexcept>

#include "swnet/linalg.hpp"

namespace swnet {

namespace {

void constraint_row(const std::array<double, 3>& c, std::size_t n, std::vector<double>& row) {
    row.assign(n, 0.0);
    const double xi = c[0];
    const int k = static_cast<int>(c[1]);
    for (std::size_t j = k; j < n; ++j) {
        double f = 1.0;
        for (int p = 0; p < k; ++p) f *= static_cast<double>(j - p);
        row[j] = f * std::pow(xi, static_cast<double>(j - k));
    }
}

}  // namespace

std::vector<double> solve_polynomial_constraints(
    const std::vector<std::array<double, 3>>& constraints) {
    // row-equilibrated solve with a few refinement passes; the raw
    // Vandermonde rows with high-derivative factorials are otherwise too
    // ill-scaled at degree 15
    const std::size_t n = constraints.size();
    Mat a(n, n);
    std::vector<double> rhs(n), row;
    for (std::size_t r = 0; r < n; ++r) {
        constraint_row(constraints[r], n, row);
        double scale = 1.0;
        for (double v : row) scale = std::max(scale, std::abs(v));
        for (std::size_t j = 0; j < n; ++j) a(r, j) = row[j] / scale;
        rhs[r] = constraints[r][2] / scale;
    }
    const Lu lu(a);
    std::vector<double> x = lu.solve(rhs);
    for (int pass = 0; pass < 3; ++pass) {
        std::vector<double> res = rhs;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t j = 0; j < n; ++j) res[r] -= a(r, j) * x[j];
        const std::vector<double> dx = lu.solve(res);
        for (std::size_t j = 0; j < n; ++j) x[j] += dx[j];
    }
    return x;
}

double polynomial_constraint_residual(const std::vector<double>& coef,
                                      const std::vector<std::array<double, 3>>& constraints) {
    // residual of the row-equilibrated system
    double worst = 0.0;
    std::vector<double> row;
    for (const auto& c : constraints) {
        constraint_row(c, coef.size(), row);
        double scale = 1.0, acc = 0.0;
        for (double v : row) scale = std::max(scale, std::abs(v));
        for (std::size_t j = 0; j < coef.size(); ++j) acc += row[j] * coef[j];
        worst = std::max(worst, std::abs(acc - c[2]) / scale);
    }
    return worst;
}

std::vector<std::array<double, 3>> hermite_constraints(double a, double b, int zeros) {
    std::vector<std::array<double, 3>> c;
    c.push_back({0.0, 0.0, a});
    c.push_back({1.0, 0.0, b});
    for (int k = 1; k <= zeros; ++k) {
        c.push_back({0.0, static_cast<double>(k), 0.0});
        c.push_back({1.0, static_cast<double>(k), 0.0});
    }
    return c;
}

std::vector<std::array<double, 3>> hermite3_constraints(double a, double mid, double b,
                                                        int zeros) {
    std::vector<std::array<double, 3>> c;
    c.push_back({0.0, 0.0, a});
    c.push_back({0.5, 0.0, mid});
    c.push_back({1.0, 0.0, b});
    for (int k = 1; k <= zeros; ++k) {
        c.push_back({0.0, static_cast<double>(k), 0.0});
        c.push_back({1.0, static_cast<double>(k), 0.0});
    }
    return c;
}

Profile Profile::make(const ProfileSpec& spec, double length) {
    Profile p;
    auto need = [&](std::size_t n) {
        if (spec.params.size() != n)
            throw std::invalid_argument("profile '" + spec.kind + "': expected " +
                                        std::to_string(n) + " parameters");
    };
    if (spec.kind == "constant") {
        need(1);
        p.smooth_ = ChebProfile::from_scaled_monomials({spec.params[0]}, length);
    } else if (spec.kind == "step") {
        need(3);
        p.pw_vals_ = {spec.params[0], spec.params[1]};
        p.pw_breaks_ = {spec.params[2]};
        if (p.pw_breaks_[0] < 0.0 || p.pw_breaks_[0] > length)
            throw std::invalid_argument("step profile: split outside the edge");
    } else if (spec.kind == "piecewise") {
        if (spec.params.size() < 3 || spec.params.size() % 2 == 0)
            throw std::invalid_argument("piecewise profile: expected v0 x1 v1 [x2 v2 ...]");
        for (std::size_t i = 0; i < spec.params.size(); ++i) {
            if (i % 2 == 0)
                p.pw_vals_.push_back(spec.params[i]);
            else
                p.pw_breaks_.push_back(spec.params[i]);
        }
        for (std::size_t i = 1; i < p.pw_breaks_.size(); ++i)
            if (p.pw_breaks_[i] <= p.pw_breaks_[i - 1])
                throw std::invalid_argument("piecewise profile: breakpoints must ascend");
        if (p.pw_breaks_.front() < 0.0 || p.pw_breaks_.back() > length)
            throw std::invalid_argument("piecewise profile: breakpoint outside the edge");
    } else if (spec.kind == "poly") {
        if (spec.params.empty()) throw std::invalid_argument("poly profile: no coefficients");
        p.smooth_ = ChebProfile::from_scaled_monomials(spec.params, length);
    } else if (spec.kind == "hermite") {
        need(3);
        const auto cons = hermite_constraints(spec.params[0], spec.params[1],
                                              static_cast<int>(spec.params[2]));
        const auto coef = solve_polynomial_constraints(cons);
        if (polynomial_constraint_residual(coef, cons) > 1e-9)
            throw std::runtime_error("hermite profile: constraint solve lost accuracy");
        p.smooth_ = ChebProfile::from_scaled_monomials(coef, length);
    } else if (spec.kind == "hermite3") {
        need(4);
        const auto cons = hermite3_constraints(spec.params[0], spec.params[1], spec.params[2],
                                               static_cast<int>(spec.params[3]));
        const auto coef = solve_polynomial_constraints(cons);
        if (polynomial_constraint_residual(coef, cons) > 1e-9)
            throw std::runtime_error("hermite3 profile: constraint solve lost accuracy");
        p.smooth_ = ChebProfile::from_scaled_monomials(coef, length);
    } else if (spec.kind == "sine-ramp") {
        need(1);
        const double amp = spec.params[0];
        p.smooth_ = ChebProfile::fit(
            [amp, length](double x) {
                const double xi = x / length;
                return amp * (xi + std::sin(M_PI * xi));
            },
            24, length);
    } else {
        throw std::invalid_argument("unknown profile kind '" + spec.kind + "'");
    }
    return p;
}

double Profile::operator()(double x) const {
    if (is_step()) {
        std::size_t i = 0;
        while (i < pw_breaks_.size() && x >= pw_breaks_[i]) ++i;
        return pw_vals_[i];
    }
    return smooth_(x);
}

double Profile::mean(double a, double b) const {
    if (is_step()) {
        double acc = 0.0, lo = a;
        for (std::size_t i = 0; i < pw_vals_.size(); ++i) {
            const double hi =
                i < pw_breaks_.size() ? std::min(std::max(pw_breaks_[i], a), b) : b;
            acc += pw_vals_[i] * (hi - lo);
            lo = hi;
        }
        return acc / (b - a);
    }
    return smooth_.mean(a, b);
}

}  // namespace swnet
