#pragma once

#include <functional>
#include <string>
#include <vector>

#include "swnet/jets.hpp"
#include "swnet/model.hpp"

namespace swnet {

/// Algebraic-ODE coupling at a vertex: residual Phi (c conditions) and ODE
/// right-hand side F (dimension l), both evaluated on plain states or on
/// truncated time jets. Jet evaluation is what the high-order solvers use to
/// take time derivatives of the conditions without symbolic algebra.
struct CouplingSpec {
    std::string name;
    int n = 0;  // connected edge count
    int c = 0;  // algebraic condition count
    int l = 0;  // ODE dimension

    /// Marks the artificial mesh-split coupling (two edges forming a straight
    /// channel); the engine treats such vertices like interior interfaces.
    bool pass_through = false;

    using PhiD = std::function<std::vector<double>(const std::vector<State>&,
                                                   const std::vector<double>&)>;
    using PhiJ = std::function<std::vector<Jet1>(const std::vector<JetState>&,
                                                 const std::vector<Jet1>&)>;
    PhiD phi;
    PhiJ phi_jet;
    PhiD rhs;      // unset when l == 0
    PhiJ rhs_jet;  // unset when l == 0
};

/// Mass conservation plus equal water depths (Eq. of "equal heights" type):
///   sum_i q_i = 0,  h_1 - h_i = 0 (i = 2..n).
/// n = 1 degenerates to the dead-end condition q_1 = 0.
CouplingSpec coupling_equal_heights(int n);

/// Two-edge pass-through junction; algebraically identical to
/// coupling_equal_heights(2) but marked so the engine may reconstruct across
/// the vertex as if the channel were meshed as one edge.
CouplingSpec coupling_transmission();

/// Storage tank / manhole of cross-section area_m at the junction:
///   w = (h_m, Q_m),
///   dh_m/dt = Q_m / A_m,
///   dQ_m/dt = g A_m / h_m * (head(u_1) - (Q_m^2/(2 g A_m^2) + h_m)),
/// with algebraic conditions sum_i q_i + Q_m = 0 and equality of hydraulic
/// heads across the connected edges.
CouplingSpec coupling_manhole(int n, double area_m, double g = 9.81);

CouplingSpec make_coupling(const std::string& kind, int n, double area_m, double g = 9.81);

}  // namespace swnet
