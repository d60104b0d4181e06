#pragma once

#include <string>
#include <vector>

namespace swnet {

/// Explicit Runge-Kutta coefficients. b and c double as the time quadrature
/// used for the junction flux integration, so the design order of the
/// tableau bounds the temporal order of the HEOC coupling.
struct ButcherTableau {
    std::string name;
    int order = 0;
    int stages = 0;
    std::vector<std::vector<double>> a;  // strictly lower triangular
    std::vector<double> b;
    std::vector<double> c;

    /// Shipped tableau of design order k (1..6); order conditions are
    /// verified numerically on first use.
    static const ButcherTableau& for_order(int k);
};

/// Largest violation of the rooted-tree order conditions up to order p,
/// including sum(b) = 1 and the row-sum consistency c_i = sum_j a_ij.
double tableau_order_residual(const ButcherTableau& t, int p);

}  // namespace swnet
