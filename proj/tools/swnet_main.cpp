#include <CLI11.hpp>
#include <iostream>

#include "swnet/harness.hpp"

namespace {

// exit codes: 0 ok, 2 config error, 3 solver failure
constexpr int kConfigError = 2;
constexpr int kSolverError = 3;

swnet::NetworkConfig load(const std::string& spec) {
    using namespace swnet;
    const std::string prefix = "builtin:";
    if (spec.rfind(prefix, 0) == 0) return builtin_case(spec.substr(prefix.size()));
    return parse_config_file(spec);
}

void apply_overrides(swnet::NetworkConfig& cfg, int order, const std::string& solver, double cfl,
                     double t_end, int cells) {
    if (order > 0) cfg.run.order = order;
    if (!solver.empty()) cfg.run.solver = solver;
    if (cfl > 0) cfg.run.cfl = cfl;
    if (t_end >= 0) {
        cfg.run.t_end = t_end;
        cfg.run.snapshots = {t_end};
    }
    if (cells > 0) swnet::set_grid(cfg, cells);
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(std::stoi(cur));
        cur.clear();
    };
    for (char c : s) {
        if (c == ',' || c == ' ')
            flush();
        else
            cur.push_back(c);
    }
    flush();
    return out;
}

std::vector<int> parse_orders(const std::string& s) {
    if (const auto dots = s.find(".."); dots != std::string::npos) {
        const int a = std::stoi(s.substr(0, dots));
        const int b = std::stoi(s.substr(dots + 2));
        std::vector<int> out;
        for (int k = a; k <= b; ++k) out.push_back(k);
        return out;
    }
    return parse_int_list(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"High-order ADER finite-volume solver for shallow-water networks"};
    app.require_subcommand(1);

    std::string config, out_dir, solver, orders = "2..4", grids = "50,100,200,400";
    int order = -1, cells = -1, ref_order = 6, ref_cells = 800;
    double cfl = -1.0, t_end = -1.0;
    bool serial = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--order", order, "override scheme order");
        cmd->add_option("--solver", solver, "override junction solver (tt|heoc)");
        cmd->add_option("--cfl", cfl, "override CFL number");
        cmd->add_option("--t-end", t_end, "override end time");
        cmd->add_option("--cells", cells, "override grid (cells on the longest edge)");
        cmd->add_flag("--serial", serial, "disable OpenMP parallel loops");
        cmd->add_option("--out", out_dir, "output directory (default $SWNET_OUTPUT_DIR or ./out)");
    };

    auto* run = app.add_subcommand("run", "run a simulation and write CSV outputs");
    run->add_option("config", config, "config file or builtin:<name>")->required();
    add_common(run);

    auto* conv = app.add_subcommand("convergence", "grid-refinement study against a fine reference");
    conv->add_option("case", config, "config file or builtin name (split-circle, ...)")->required();
    conv->add_option("--solver", solver, "junction solver (tt|heoc)")->default_val("tt");
    conv->add_option("--orders", orders, "orders, e.g. 2..6 or 2,4,5");
    conv->add_option("--grids", grids, "grids, e.g. 50,100,200,400");
    conv->add_option("--ref-order", ref_order, "reference scheme order");
    conv->add_option("--ref-cells", ref_cells, "reference grid");
    conv->add_option("--t-end", t_end, "override end time");
    conv->add_flag("--serial", serial, "disable OpenMP parallel loops");
    conv->add_option("--out", out_dir, "output directory");

    auto* list = app.add_subcommand("list-cases", "print the built-in case names");
    (void)list;

    auto* val = app.add_subcommand("validate", "parse and validate a config, then exit");
    val->add_option("config", config, "config file or builtin:<name>")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list-cases")) {
            for (const std::string& n : swnet::builtin_case_names()) std::cout << n << "\n";
            return 0;
        }
        if (app.got_subcommand("validate")) {
            swnet::NetworkConfig cfg = load(config);
            swnet::Network net = swnet::build_network(cfg);
            swnet::StepOptions opt;
            opt.order = cfg.run.order;
            opt.solver = swnet::solver_from_name(cfg.run.solver);
            swnet::Engine eng(std::move(net), opt);  // runs the topology/grid checks
            std::cout << "ok: " << eng.network().edges.size() << " edges, "
                      << eng.network().verts.size() << " vertices\n";
            return 0;
        }
        if (app.got_subcommand("run")) {
            swnet::NetworkConfig cfg = load(config);
            apply_overrides(cfg, order, solver, cfl, t_end, cells);
            const std::string dir =
                out_dir.empty() ? swnet::output_dir_from_env("out") : out_dir;
            try {
                const auto files = swnet::run_to_files(cfg, dir, !serial);
                for (const std::string& f : files) std::cout << f << "\n";
            } catch (const swnet::ConfigError&) {
                throw;
            } catch (const std::exception& e) {
                std::cerr << "solver failure: " << e.what() << "\n";
                return kSolverError;
            }
            return 0;
        }
        if (app.got_subcommand("convergence")) {
            swnet::NetworkConfig base;
            try {
                base = swnet::builtin_case(config);
            } catch (const swnet::ConfigError&) {
                base = load(config);
            }
            if (t_end >= 0) base.run.t_end = t_end;
            swnet::ConvergenceOptions o;
            o.solver = solver.empty() ? "tt" : solver;
            o.orders = parse_orders(orders);
            o.grids = parse_int_list(grids);
            o.ref_order = ref_order;
            o.ref_cells = ref_cells;
            o.parallel = !serial;
            o.progress = &std::cerr;
            std::vector<swnet::ConvergenceTable> tables;
            try {
                tables = swnet::convergence_study(base, o);
            } catch (const swnet::ConfigError&) {
                throw;
            } catch (const std::exception& e) {
                std::cerr << "solver failure: " << e.what() << "\n";
                return kSolverError;
            }
            std::cout << swnet::format_convergence_text(tables);
            const std::string dir =
                out_dir.empty() ? swnet::output_dir_from_env("out") : out_dir;
            std::filesystem::create_directories(dir);
            const std::string path = dir + "/convergence.csv";
            std::ofstream f(path);
            f << swnet::format_convergence_csv(tables);
            std::cerr << "wrote " << path << "\n";
            return 0;
        }
    } catch (const swnet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const swnet::NetworkError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolverError;
    }
    return 0;
}
