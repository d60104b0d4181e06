#pragma once

#include <iosfwd>
#include <optional>

#include "swnet/config.hpp"
#include "swnet/engine.hpp"

namespace swnet {

std::vector<std::string> builtin_case_names();
/// The shipped test networks; throws ConfigError for unknown names.
NetworkConfig builtin_case(const std::string& name);
/// Rescales every edge's cell count proportionally to its length, with
/// `cells` on the longest edge.
void set_grid(NetworkConfig& cfg, int cells);

/// Coefficients (monomials in xi = x/L) of the polynomial matching value a at
/// x=0, b at x=L, with derivatives 1..zero_derivs vanishing at both ends.
std::vector<double> hermite_init(double a, double b, int zero_derivs);

struct TraceSample {
    double t = 0.0;
    std::vector<std::vector<double>> vertex_w;
    std::vector<double> region_w;
};

struct SimResult {
    NetworkConfig cfg;
    Network net;  // final state
    std::vector<TraceSample> trace;
    std::vector<char> vertex_in_region;  // ODE state owned by the lumped composite
    std::vector<std::pair<double, std::vector<std::vector<State>>>> snapshots;
    long steps = 0;
    long newton_iters = 0;
    double wall_seconds = 0.0;
};

SimResult simulate(const NetworkConfig& cfg, bool parallel = true, bool keep_snapshots = false);

struct PdeErrors {
    double l1_h = 0.0, linf_h = 0.0;
    double l1_q = 0.0, linf_q = 0.0;
};

/// Errors of the coarse run against a finer reference on nested grids; the
/// reference is restricted by exact cell-average agglomeration.
PdeErrors pde_errors(const Network& coarse, const Network& fine);

/// Trace distance sqrt(int |w - w_ref|^2 dt) over the shared sample grid,
/// summed over all vertex ODE components and lumped-region components.
double ode_l2(const SimResult& run, const SimResult& ref);

double eoc(double err_coarse, double err_fine, double dx_coarse, double dx_fine);

struct ConvergenceRow {
    int cells = 0;
    long steps = 0;
    PdeErrors pde;
    double l2_ode = 0.0;
    double eoc_l1 = 0.0, eoc_linf = 0.0, eoc_l2 = 0.0;
};

struct ConvergenceTable {
    int order = 0;
    std::string solver;
    std::vector<ConvergenceRow> rows;
};

struct ConvergenceOptions {
    std::string solver = "tt";
    std::vector<int> orders{2, 3, 4};
    std::vector<int> grids{50, 100, 200, 400};
    int ref_order = 6;
    int ref_cells = 800;
    bool parallel = true;
    std::ostream* progress = nullptr;
};

std::vector<ConvergenceTable> convergence_study(const NetworkConfig& base,
                                                const ConvergenceOptions& opt);

std::string format_convergence_csv(const std::vector<ConvergenceTable>& tables);
std::string format_convergence_text(const std::vector<ConvergenceTable>& tables);

/// Runs a config and writes per-edge snapshots and per-vertex traces as CSV
/// into out_dir (created if missing). Returns the list of files written.
std::vector<std::string> run_to_files(const NetworkConfig& cfg, const std::string& out_dir,
                                      bool parallel = true);

std::string output_dir_from_env(const std::string& fallback);

}  // namespace swnet
