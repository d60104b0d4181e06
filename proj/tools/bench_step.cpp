// Times the step loop with the OpenMP phases enabled vs the serial reference
// path on the split-circle case, and checks that both produce identical
// states.

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "swnet/harness.hpp"

using namespace swnet;

namespace {

double run_case(int order, SolverKind solver, int cells, int steps, bool parallel,
                Network* out) {
    NetworkConfig cfg = builtin_case("split-circle");
    set_grid(cfg, cells);
    StepOptions opt;
    opt.order = order;
    opt.solver = solver;
    opt.parallel = parallel;
    Engine eng(build_network(cfg), opt);
    const auto t0 = std::chrono::steady_clock::now();
    for (int s = 0; s < steps; ++s) eng.step();
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out) *out = eng.network();
    return dt;
}

double max_diff(const Network& a, const Network& b) {
    double m = 0.0;
    for (std::size_t e = 0; e < a.edges.size(); ++e)
        for (int i = 0; i < a.edges[e].cells; ++i)
            for (int c = 0; c < 2; ++c)
                m = std::max(m, std::abs(a.edges[e].u[i][c] - b.edges[e].u[i][c]));
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    int cells = 400, steps = 20;
    if (argc > 1) cells = std::atoi(argv[1]);
    if (argc > 2) steps = std::atoi(argv[2]);

#ifdef _OPENMP
    std::cout << "OpenMP threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "built without OpenMP; both runs are serial\n";
#endif
    std::cout << "split-circle, N=" << cells << ", " << steps << " steps\n\n";
    std::cout << std::setw(8) << "order" << std::setw(8) << "solver" << std::setw(12)
              << "serial[s]" << std::setw(12) << "omp[s]" << std::setw(10) << "speedup"
              << std::setw(12) << "max|diff|"
              << "\n";
    for (const SolverKind solver : {SolverKind::tt, SolverKind::heoc}) {
        for (const int order : {2, 4, 6}) {
            Network ser, par;
            const double ts = run_case(order, solver, cells, steps, false, &ser);
            const double tp = run_case(order, solver, cells, steps, true, &par);
            std::cout << std::setw(8) << order << std::setw(8)
                      << (solver == SolverKind::tt ? "tt" : "heoc") << std::setw(12)
                      << std::fixed << std::setprecision(3) << ts << std::setw(12) << tp
                      << std::setw(10) << std::setprecision(2) << ts / tp << std::setw(12)
                      << std::scientific << std::setprecision(1) << max_diff(ser, par) << "\n";
        }
    }
    return 0;
}
