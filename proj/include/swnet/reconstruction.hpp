#pragma once

#include "swnet/jets.hpp"
#include "swnet/linalg.hpp"
#include "swnet/model.hpp"

namespace swnet {

inline constexpr int kMaxOrder = 7;

/// Downwind share of the trace window: the left trace at an interface uses
/// the K cells [m-K+bias .. m-1+bias]. bias = 0 would be fully one-sided,
/// which is linearly unstable for K >= 3; this choice recovers the classical
/// upwind-biased stencils (stable to CFL 1 for every shipped order).
inline int stencil_bias(int K) { return (K - 1) / 2; }

struct ReconError : std::runtime_error {
    explicit ReconError(const std::string& w) : std::runtime_error(w) {}
};

/// Monomial coefficients (window-start origin, unit cell width) of the degree
/// r-1 polynomial matching r consecutive cell averages: row i = coefficient
/// of x^i, column j = weight of average j.
const Mat& recon_poly_table(int r);

enum class TraceSide { left, right };

/// Reconstruction parameters shared by interior traces and junction data.
struct TraceScheme {
    int order = 3;
    bool weno = true;
    // Jiang-Shu style nonlinear weight parameters
    double eps = 1e-6;
    int power = 2;
};

/// Jet of one trace at a cell interface. `window` points at the first of
/// `K` consecutive cell averages; the anchor sits `delta` cell widths from
/// the window start (0..K). `side` selects the adjacent cell used for the
/// smoothness measurements.
SpatialJet trace_jet(const State* window, const TraceScheme& scheme, int delta, TraceSide side,
                     double dx);

/// Per-interface pair of traces over a plain array of cell averages (no
/// ghost data; windows shift near the array ends). Interfaces 0..n.
struct InterfacePair {
    SpatialJet left;
    SpatialJet right;
};
std::vector<InterfacePair> reconstruct_interfaces(const std::vector<State>& averages, double dx,
                                                  const TraceScheme& scheme);

/// One-sided jet at the array boundary built from the `order` cells adjacent
/// to that end (stencil entirely inside the data).
SpatialJet reconstruct_one_sided(const std::vector<State>& averages, bool right_end, double dx,
                                 const TraceScheme& scheme);

}  // namespace swnet
