#pragma once

#include <string>
#include <vector>

#include "swnet/poly.hpp"

namespace swnet {

/// Initial-data / bottom profile description as parsed from a config.
/// Kinds:
///   constant v
///   step v_left v_right x_split
///   piecewise v0 x1 v1 x2 v2 ...   (breakpoints in ascending order)
///   poly c0 c1 ...            (monomials in xi = x / L)
///   hermite a b m             (value a at 0, b at L, derivatives 1..m zero at both ends)
///   hermite3 a mid b m        (additionally pins the midpoint value)
///   sine-ramp amp             (amp * (xi + sin(pi xi)), bottoms only)
struct ProfileSpec {
    std::string kind;  // empty = unset
    std::vector<double> params;

    bool empty() const { return kind.empty(); }
};

/// Polynomial through endpoint values with vanishing derivatives, solved from
/// the Vandermonde-type constraint system in the scaled variable.
/// constraints: (xi_location, derivative_order, value-in-xi-units).
std::vector<double> solve_polynomial_constraints(
    const std::vector<std::array<double, 3>>& constraints);

/// Residual of a coefficient vector against the same constraints.
double polynomial_constraint_residual(const std::vector<double>& coef,
                                      const std::vector<std::array<double, 3>>& constraints);

/// Constraint set for endpoint-value data with `zeros` vanishing derivatives
/// at both ends (degree 2 * zeros + 1).
std::vector<std::array<double, 3>> hermite_constraints(double a, double b, int zeros);
/// Same plus a pinned midpoint value (degree 2 * zeros + 2).
std::vector<std::array<double, 3>> hermite3_constraints(double a, double mid, double b,
                                                        int zeros);

class Profile {
public:
    Profile() = default;
    static Profile make(const ProfileSpec& spec, double length);

    bool is_step() const { return !pw_vals_.empty(); }
    double operator()(double x) const;
    /// Exact cell average over [a, b].
    double mean(double a, double b) const;
    const ChebProfile& smooth() const { return smooth_; }

private:
    std::vector<double> pw_vals_;    // piecewise-constant values (empty = smooth)
    std::vector<double> pw_breaks_;  // ascending interior breakpoints
    ChebProfile smooth_;
};

}  // namespace swnet
