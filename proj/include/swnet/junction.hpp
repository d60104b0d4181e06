#pragma once

#include <stdexcept>
#include <vector>

#include "swnet/coupling.hpp"
#include "swnet/jets.hpp"
#include "swnet/model.hpp"
#include "swnet/tableau.hpp"

namespace swnet {

struct JunctionError : std::runtime_error {
    explicit JunctionError(const std::string& w) : std::runtime_error(w) {}
};
struct JunctionNoConvergence : JunctionError {
    using JunctionError::JunctionError;
};
struct JunctionSingularCoupling : JunctionError {
    using JunctionError::JunctionError;
};
struct JunctionStateLeftSubcritical : JunctionError {
    using JunctionError::JunctionError;
};
struct JunctionSingularDerivativeSystem : JunctionError {
    using JunctionError::JunctionError;
};

struct NewtonOptions {
    double tol = 1e-12;  // absolute, on the max-norm of the residual
    int max_iter = 50;
    int max_halvings = 40;
};

/// Everything below operates in the vertex frame: all edges oriented outward,
/// states and jets already mirrored by the caller.

struct ClassicalResult {
    std::vector<State> godunov;
    int iters = 0;
};

/// Newton iteration on the concatenated-Lax-curve parameters, starting from
/// the right states. Checks the well-posedness determinant at the solution.
ClassicalResult solve_classical(const std::vector<const Model*>& models,
                                const std::vector<State>& ur, const std::vector<double>& w0,
                                const CouplingSpec& spec, const NewtonOptions& opt = {});

struct TTResult {
    std::vector<TimeJet> godunov;   // per edge, K time derivatives
    std::vector<Jet1> w_jet;        // K+1 coefficients (empty if spec.l == 0)
    std::vector<double> w_new;      // Taylor update over dt
    std::vector<State> flux_avg;    // per edge, mean of the flux jet over [0, dt]
    int iters = 0;
};

/// Toro-Castro type generalized Riemann solver: one nonlinear classical solve,
/// then per derivative order a linear system for the Lax-curve increments,
/// with the ODE advanced by the Taylor series collected along the way.
TTResult solve_tt(const std::vector<const Model*>& models,
                  const std::vector<SpatialJet>& sjets, const std::vector<double>& w0,
                  const CouplingSpec& spec, int K, double dt,
                  const std::vector<const BiSeries*>& bottom_slope = {},
                  const NewtonOptions& opt = {});

struct HeocResult {
    std::vector<std::vector<State>> stage_godunov;  // [stage][edge]
    std::vector<std::vector<double>> stage_w;       // [stage]
    std::vector<TimeJet> trace;                     // CK time polynomials per edge
    std::vector<double> w_new;
    std::vector<State> flux_avg;  // per edge, tableau-weighted flux
    int iters = 0;
};

/// Harten-Engquist-Osher-Chakravarthy type solver: classical junction problems
/// at the Runge-Kutta stage times, fluxes and ODE update composed with the
/// tableau weights.
HeocResult solve_heoc(const std::vector<const Model*>& models,
                      const std::vector<SpatialJet>& sjets, const std::vector<double>& w0,
                      const CouplingSpec& spec, int K, double dt, const ButcherTableau& tab,
                      const std::vector<const BiSeries*>& bottom_slope = {},
                      const NewtonOptions& opt = {});

/// Matrix of the well-posedness condition: columns grad_{u^i} Phi * R^{+,i},
/// evaluated at the given states.
Mat coupling_condition_matrix(const std::vector<const Model*>& models,
                              const std::vector<State>& ug, const std::vector<double>& w,
                              const CouplingSpec& spec);

}  // namespace swnet
