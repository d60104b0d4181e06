#pragma once

#include <limits>
#include <optional>

#include "swnet/junction.hpp"
#include "swnet/lpm.hpp"
#include "swnet/network.hpp"
#include "swnet/reconstruction.hpp"
#include "swnet/tableau.hpp"

namespace swnet {

struct EngineError : std::runtime_error {
    explicit EngineError(const std::string& w) : std::runtime_error(w) {}
};

enum class SolverKind { tt, heoc };

SolverKind solver_from_name(const std::string& name);

/// Stable default CFL number for the trace stencils of a given order.
double default_cfl(int order);

struct StepOptions {
    int order = 3;
    SolverKind solver = SolverKind::tt;
    double cfl = 0.0;  // <= 0 selects default_cfl(order)
    bool weno = true;
    bool parallel = true;
    NewtonOptions newton;
};

struct StepStats {
    double dt = 0.0;
    long steps = 0;
    long newton_iters = 0;
};

/// One-step ADER update for the whole network: reconstruction of interface
/// traces, generalized Riemann problems at interior interfaces and junctions,
/// well-balanced source quadrature, conservative cell update, vertex ODE and
/// lumped-region updates. All interfaces of a step see the same dt.
class Engine {
public:
    Engine(Network net, StepOptions opt);

    /// Collapse the given edges into a lumped-parameter region.
    void lump(const std::vector<std::string>& edge_ids);

    double compute_dt(double cfl) const;
    StepStats step(double dt_cap = std::numeric_limits<double>::infinity());
    /// Steps until the simulation clock reaches t exactly.
    StepStats advance_to(double t);

    double time() const { return t_; }
    const Network& network() const { return net_; }
    Network& network() { return net_; }
    const StepOptions& options() const { return opt_; }
    const LumpedRegion* region() const { return region_ ? &*region_ : nullptr; }

    /// (mass, momentum) summed over cells, lumped edges (mass) and tanks (mass).
    State total_conserved() const;

private:
    struct EdgeScratch {
        int ghosts_left = 0, ghosts_right = 0;
        std::vector<State> padded;              // (H, q) with ghost cells
        std::vector<SpatialJet> trace_l;        // per interface, (h, q)
        std::vector<SpatialJet> trace_r;
        std::vector<double> flux_mass;          // per interface
        std::vector<double> flux_mom_left;      // momentum flux seen by the left cell
        std::vector<double> flux_mom_right;     // momentum flux seen by the right cell
        std::vector<std::array<double, kMaxJet>> bjet;  // bottom derivatives per interface
    };

    struct SharedFlux {
        double mass = 0.0;
        double mom_l = 0.0;  // momentum flux seen by the left side
        double mom_r = 0.0;
    };

    void validate() const;
    bool pass_through_at(int edge, bool right_end) const;
    void fill_padded(int e);
    void build_traces(int e);
    SpatialJet endpoint_jet(int e, bool right_end) const;  // vertex frame, (h, q)
    SharedFlux solve_shared(const Model* ml, const Model* mr, const SpatialJet& jl,
                            const SpatialJet& jr, double bl, double br,
                            const BiSeries* slope_back, const BiSeries* slope_fwd, long& iters);
    void solve_interior(int e, int m, long& iters);  // flux at interface m of edge e
    void solve_pass_through(int vi, long& iters);
    void solve_vertex(int vi, std::vector<double>& w_next, long& iters);
    void apply_region(double dt, long& iters);
    void apply_sources(int e, double dt);
    void update_cells(int e, double dt);

    Network net_;
    StepOptions opt_;
    std::optional<LumpedRegion> region_;
    std::vector<EdgeScratch> scratch_;
    std::vector<std::vector<double>> w_next_;
    double t_ = 0.0;
    double dt_ = 0.0;
};

}  // namespace swnet
