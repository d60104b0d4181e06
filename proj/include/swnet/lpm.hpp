#pragma once

#include <vector>

#include "swnet/junction.hpp"
#include "swnet/network.hpp"
#include "swnet/tableau.hpp"

namespace swnet {

struct LpmError : std::runtime_error {
    explicit LpmError(const std::string& w) : std::runtime_error(w) {}
};

/// A sub-network collapsed to averaged edge states plus the ODE states of the
/// vertices it contains, forming one composite ODE solved stage-wise.
struct LumpedRegion {
    struct LumpedEdge {
        int edge = -1;
        double length = 0.0;
        double b_end[2] = {0.0, 0.0};  // bed elevation at x = 0 / x = L
        double b_datum = 0.0;          // (b(0) + b(L)) / 2, the linearized reference level
        int offset = 0;                // slot of the averaged state in w
    };
    struct End {
        bool lumped = false;
        int lumped_index = -1;  // into edges, when lumped
        int edge = -1;          // network edge (live or lumped)
        bool mirror = false;
        int pde_slot = -1;      // index into the caller-supplied boundary jets, when live
    };
    struct RegionVertex {
        int vertex = -1;
        int w_offset = -1;  // slot of the vertex ODE state in w, -1 if none
        std::vector<End> ends;
    };

    std::vector<LumpedEdge> edges;
    std::vector<RegionVertex> verts;
    std::vector<double> w;  // composite: per-edge (h, q) pairs then vertex ODE states
    int pde_slots = 0;      // number of live-edge boundary interfaces

    int dim() const { return static_cast<int>(w.size()); }
    double lumped_mass() const;
};

/// Collapses the given edges. Initial averaged states come from the cell
/// averages, with the depth corrected for the mismatch between the true and
/// the linearized bottom so that flat free surfaces stay exact.
LumpedRegion lump_region(const Network& net, const std::vector<int>& edge_ids);

/// Audusse-style interface value for a lumped anchor: depth re-expressed over
/// the local reference level, discharge preserved.
State hydrostatic_reconstruct(const State& u, double b_here, double b_neighbor);

struct LpmStepResult {
    std::vector<double> w_new;
    /// Tableau-averaged physical flux for every live-edge boundary interface
    /// (indexed by pde_slot), in the vertex frame of that end, including the
    /// hydrostatic datum correction.
    std::vector<State> boundary_flux;
    long iters = 0;
};

/// One HEOC step of the composite region. `pde_jets[slot]` are the one-sided
/// jets of the live edges in the vertex frame (not datum-adjusted; the region
/// applies its own vertex datums).
LpmStepResult lpm_stage_solve(const LumpedRegion& region, const Network& net,
                              const std::vector<SpatialJet>& pde_jets,
                              const std::vector<const BiSeries*>& pde_slopes, int order,
                              double dt, const ButcherTableau& tab,
                              const NewtonOptions& newton = {});

}  // namespace swnet
