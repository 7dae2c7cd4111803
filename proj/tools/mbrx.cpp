#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mbrx/analysis.hpp"
#include "mbrx/config.hpp"
#include "mbrx/driver.hpp"
#include "mbrx/errors.hpp"
#include "mbrx/io.hpp"
#include "mbrx/version.hpp"

namespace fs = std::filesystem;
using namespace mbrx;

namespace {

// Flags stay unset unless given, so a config file and built-in defaults can
// fill the gaps in that order.
struct Overrides {
    std::optional<double> p0;
    std::vector<double> sweep;
    std::optional<long> n;
    std::optional<long> record;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> workers;
    std::optional<std::string> grid;
    std::optional<double> dt;
    std::optional<double> tfinal;
};

void apply_grid_flag(const std::string& text, RunConfig& cfg) {
    const ConfigError bad("--grid expects NXxNY, got \"" + text + "\"");
    const auto sep = text.find('x');
    if (sep == std::string::npos || sep == 0 || sep + 1 >= text.size())
        throw bad;
    std::size_t used_a = 0, used_b = 0;
    int nx = 0, ny = 0;
    try {
        nx = std::stoi(text.substr(0, sep), &used_a);
        ny = std::stoi(text.substr(sep + 1), &used_b);
    } catch (const std::exception&) {
        throw bad;
    }
    if (used_a != sep || used_b != text.size() - sep - 1) throw bad;
    cfg.nx = nx;
    cfg.ny = ny;
}

void apply_overrides(RunConfig& cfg, const Overrides& o,
                     const std::string& sub) {
    if (o.p0) cfg.p0 = *o.p0;
    if (!o.sweep.empty()) cfg.p0_sweep = o.sweep;
    if (o.n) cfg.count = *o.n;
    if (o.record) cfg.record_count = *o.record;
    if (o.seed) cfg.seed = *o.seed;
    if (o.out) cfg.out_dir = *o.out;
    if (o.workers) cfg.workers = *o.workers;
    if (o.grid) apply_grid_flag(*o.grid, cfg);
    const bool classical_time = sub == "classical" || sub == "cara";
    if (o.dt) (classical_time ? cfg.cl_dt : cfg.q_dt) = *o.dt;
    if (o.tfinal) {
        if (classical_time) cfg.cl_t_final = *o.tfinal;
        else if (sub == "quantum" || sub == "bohmian") cfg.q_t_final = *o.tfinal;
        else cfg.cl_t_final = cfg.q_t_final = *o.tfinal;
    }
}

struct Workspace {
    PesModel model = PesModel::muller_brown();
    MbStationarySet points;
    FrontierLine frontier;
};

Workspace make_workspace(const RunConfig& cfg) {
    Workspace w;
    const NewtonOptions newton;
    const auto report = find_stationary_points(
        w.model, grid_seeds(newton.keep_region, 24, 24), newton);
    w.points = locate_mb_points(report);
    w.frontier = {cfg.frontier_slope, cfg.frontier_intercept};
    return w;
}

GridSpec grid_from(const RunConfig& cfg) {
    GridSpec g;
    g.extent = cfg.extent;
    g.nx = cfg.nx;
    g.ny = cfg.ny;
    g.dt = cfg.q_dt;
    g.mass = cfg.mass;
    g.hbar = cfg.hbar;
    return g;
}

// Wave runs grow the box with the launch momentum so the fast tail of the
// packet turns around inside the grid instead of reaching the edges. The
// configured extent is the floor; when the box grows, nx and ny scale up to
// keep the configured cell size.
GridSpec grid_for_packet(const RunConfig& cfg, const Workspace& w) {
    const GridSpec base = grid_from(cfg);
    const Box grown =
        containing_box(w.model, w.points.m3.position, cfg.sigma_sq,
                       {-cfg.p0, cfg.p0}, cfg.mass, cfg.hbar, cfg.extent);
    return grown == cfg.extent ? base : regrid(base, grown);
}

std::string grid_note(const GridSpec& g, const RunConfig& cfg) {
    if (g.extent == cfg.extent) return "";
    char buf[96];
    std::snprintf(buf, sizeof(buf), ", grid %dx%d on [%g,%g]x[%g,%g]", g.nx,
                  g.ny, g.extent.x_min, g.extent.x_max, g.extent.y_min,
                  g.extent.y_max);
    return buf;
}

EnsembleSpec spec_from(const RunConfig& cfg, const Workspace& w) {
    return {w.points.m3.position, cfg.sigma_sq, {-cfg.p0, cfg.p0}};
}

ClassicalEnsembleOptions classical_options(const RunConfig& cfg,
                                           const Workspace& w,
                                           Sampling sampling) {
    ClassicalEnsembleOptions o;
    o.spec = spec_from(cfg, w);
    o.sampling = sampling;
    o.count = cfg.count;
    o.seed = cfg.seed;
    o.integrator = {cfg.cl_dt, cfg.cl_t_final, cfg.cl_stride, cfg.mass};
    o.frontier = w.frontier;
    o.workers = cfg.workers;
    o.record_count = cfg.record_count;
    o.hbar = cfg.hbar;
    return o;
}

QuantumEnsembleOptions quantum_options(const RunConfig& cfg,
                                       const Workspace& w) {
    QuantumEnsembleOptions o;
    o.grid = grid_for_packet(cfg, w);
    o.center = w.points.m3.position;
    o.sigma_sq = cfg.sigma_sq;
    o.momentum = {-cfg.p0, cfg.p0};
    o.count = cfg.count;
    o.seed = cfg.seed;
    o.t_final = cfg.q_t_final;
    o.stride = cfg.q_stride;
    o.frontier = w.frontier;
    o.workers = cfg.workers;
    o.record_count = cfg.record_count;
    o.leak_band = cfg.leak_band;
    o.leak_warn_fraction = cfg.leak_warn;
    o.leak_error_fraction = cfg.leak_error;
    o.node_policy = {cfg.node_substeps, cfg.node_max_refines};
    o.node_floor_fraction = cfg.node_floor;
    return o;
}

void write_recorded(const std::string& dir, const std::string& prefix,
                    const std::vector<Trajectory>& recorded) {
    char name[96];
    for (const Trajectory& traj : recorded) {
        std::snprintf(name, sizeof(name), "%s_%04ld.csv", prefix.c_str(),
                      traj.id);
        write_trajectory_csv(dir + "/" + name, traj);
    }
}

void write_pairs_csv(const std::string& path, const PairedDifference& d) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "t,mean_dx,max_dx,mean_dp,max_dp\n";
    for (std::size_t k = 0; k < d.t.size(); ++k)
        out << format_double(d.t[k]) << ',' << format_double(d.mean_dx[k])
            << ',' << format_double(d.max_dx[k]) << ','
            << format_double(d.mean_dp[k]) << ',' << format_double(d.max_dp[k])
            << '\n';
}

int cmd_stationary(const RunConfig& cfg) {
    const Workspace w = make_workspace(cfg);
    // Reaction order: reactant minimum first, deepest minimum last.
    const std::vector<StationaryPoint> ordered = {
        w.points.m3, w.points.ts2, w.points.m2, w.points.ts1, w.points.m1};
    const std::string path = cfg.out_dir + "/stationary.csv";
    write_stationary_csv(path, ordered);
    for (const StationaryPoint& p : ordered)
        std::cout << (p.kind == StationaryKind::minimum ? "minimum" : "saddle")
                  << " at (" << format_double(p.position.x) << ", "
                  << format_double(p.position.y) << ") V "
                  << format_double(p.energy) << '\n';
    std::cout << "wrote " << path << '\n';
    return 0;
}

int cmd_rp(const RunConfig& cfg) {
    const Workspace w = make_workspace(cfg);
    const ReactionPath path = build_full_path(w.model, w.points);
    const std::string out = cfg.out_dir + "/rp.csv";
    write_path_csv(out, path);
    std::cout << "wrote " << out << " (" << path.points.size()
              << " points, arc length " << format_double(path.arc_length())
              << ")\n";
    return 0;
}

int cmd_energy_diagram(const RunConfig& cfg) {
    const Workspace w = make_workspace(cfg);
    std::vector<double> values = cfg.p0_sweep;
    if (values.empty())
        for (int i = 0; i <= 48; ++i) values.push_back(0.25 * i);
    const EnergyDiagram d =
        mean_energy_diagram(w.model, spec_from(cfg, w), values, cfg.count,
                            cfg.seed, cfg.mass, cfg.hbar);
    const std::string out = cfg.out_dir + "/energy_diagram.csv";
    write_energy_diagram_csv(out, d);
    std::cout << "V_mean " << format_double(d.V_mean) << " (se "
              << format_double(d.V_se) << "), delta "
              << format_double(d.delta) << '\n'
              << "wrote " << out << '\n';
    return 0;
}

int cmd_classical(const RunConfig& cfg) {
    const Workspace w = make_workspace(cfg);
    for (const Sampling sampling : {Sampling::rho0, Sampling::wigner}) {
        const char* tag = sampling == Sampling::rho0 ? "rho0" : "wigner";
        const auto result = run_classical_ensemble(
            w.model, classical_options(cfg, w, sampling));
        const std::string out =
            cfg.out_dir + "/classical_" + tag + ".csv";
        write_series_csv(out, result.series);
        write_recorded(cfg.out_dir, std::string("traj_cl_") + tag,
                       result.recorded);
        std::cout << tag << ": Wbar(t_final) "
                  << format_double(result.series.Wbar.back()) << ", E0 "
                  << format_double(result.mean_initial_energy) << " (se "
                  << format_double(result.initial_energy_se) << ")\n"
                  << "wrote " << out << '\n';
    }
    return 0;
}

int cmd_quantum(const RunConfig& cfg) {
    const Workspace w = make_workspace(cfg);
    const GridSpec grid = grid_for_packet(cfg, w);
    WaveField field = initial_packet(grid, w.points.m3.position, cfg.sigma_sq,
                                     {-cfg.p0, cfg.p0});
    const SpectralOps ops(grid);
    WaveRunOptions options;
    options.t_final = cfg.q_t_final;
    options.stride = cfg.q_stride;
    options.leak_band = cfg.leak_band;
    options.leak_warn_fraction = cfg.leak_warn;
    options.leak_error_fraction = cfg.leak_error;
    const WaveRunResult result =
        run_quantum_wave(w.model, std::move(field), ops, w.frontier, options);
    const std::string out = cfg.out_dir + "/quantum.csv";
    write_series_csv(out, result.series);
    std::cout << "P(t_final) " << format_double(result.series.P.back())
              << ", norm drift " << format_double(result.max_norm_drift)
              << ", leak warnings " << result.leak_warnings
              << grid_note(grid, cfg) << '\n'
              << "wrote " << out << '\n';
    return 0;
}

int cmd_bohmian(const RunConfig& cfg) {
    const Workspace w = make_workspace(cfg);
    const QuantumEnsembleOptions options = quantum_options(cfg, w);
    const auto result = run_quantum_ensemble(w.model, options);
    const std::string out = cfg.out_dir + "/bohmian.csv";
    write_series_csv(out, result.series);
    write_recorded(cfg.out_dir, "traj_bohm", result.recorded);
    std::cout << "P(t_final) " << format_double(result.series.P.back())
              << ", Wbar(t_final) " << format_double(result.series.Wbar.back())
              << ", E0 " << format_double(result.initial_energy)
              << ", node clamps " << result.total_node_clamps
              << grid_note(options.grid, cfg) << '\n'
              << "wrote " << out << '\n';
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    if (cfg.p0_sweep.empty())
        throw ConfigError("sweep needs p0 values (--sweep or p0_sweep)");
    const Workspace w = make_workspace(cfg);
    std::vector<SweepRow> rows;
    for (const double p0 : cfg.p0_sweep) {
        RunConfig at = cfg;
        at.p0 = p0;
        at.record_count = 0;
        const QuantumEnsembleOptions q_options = quantum_options(at, w);
        const auto quantum = run_quantum_ensemble(w.model, q_options);
        const auto cl_rho0 = run_classical_ensemble(
            w.model, classical_options(at, w, Sampling::rho0));
        const auto cl_wigner = run_classical_ensemble(
            w.model, classical_options(at, w, Sampling::wigner));
        rows.push_back({p0,
                        asymptotic_products(quantum.series, cfg.q_t_final),
                        asymptotic_products(cl_rho0.series, cfg.cl_t_final),
                        asymptotic_products(cl_wigner.series, cfg.cl_t_final)});
        std::cout << "p0 " << format_double(p0) << ": bohm "
                  << format_double(rows.back().Wbar_bohm) << ", rho0 "
                  << format_double(rows.back().Wbar_cl_rho0) << ", wigner "
                  << format_double(rows.back().Wbar_cl_wigner)
                  << grid_note(q_options.grid, cfg) << '\n';
    }
    const std::string out = cfg.out_dir + "/sweep.csv";
    write_sweep_csv(out, rows);
    std::cout << "wrote " << out << '\n';
    return 0;
}

int cmd_cara(const RunConfig& cfg) {
    const Workspace w = make_workspace(cfg);
    const ReactionPath path = build_full_path(w.model, w.points);
    RunConfig at = cfg;
    if (at.record_count == 0) at.record_count = 64;
    const auto result = run_classical_ensemble(
        w.model, classical_options(at, w, Sampling::rho0));
    const Trajectory* reactive = nullptr;
    for (const Trajectory& traj : result.recorded)
        if (w.frontier.in_products(traj.position.back())) {
            reactive = &traj;
            break;
        }
    if (!reactive)
        throw NumericalError(
            "no recorded trajectory ends in the product region; raise "
            "--record or --p0");
    const ClosenessMatrix matrix = caratheodory(*reactive, path);
    write_closeness(cfg.out_dir + "/cara", matrix);
    write_trajectory_csv(cfg.out_dir + "/cara_trajectory.csv", *reactive);
    write_path_csv(cfg.out_dir + "/rp.csv", path);
    std::cout << "trajectory " << reactive->id << " vs path: "
              << matrix.n_time << "x" << matrix.n_arc << " matrix\n"
              << "wrote " << cfg.out_dir << "/cara.bin\n";
    return 0;
}

int cmd_pairs(const RunConfig& cfg) {
    const Workspace w = make_workspace(cfg);
    RunConfig at = cfg;
    if (at.record_count == 0) at.record_count = 16;
    const QuantumEnsembleOptions q_options = quantum_options(at, w);
    const auto quantum = run_quantum_ensemble(w.model, q_options);
    const auto classical = run_classical_ensemble(
        w.model, classical_options(at, w, Sampling::rho0));
    const PairedDifference d =
        paired_difference(classical.recorded, quantum.recorded);
    const std::string out = cfg.out_dir + "/pairs.csv";
    write_pairs_csv(out, d);
    std::cout << "final mean |dx| " << format_double(d.mean_dx.back())
              << ", mean |dp| " << format_double(d.mean_dp.back())
              << grid_note(q_options.grid, cfg) << '\n'
              << "wrote " << out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Muller-Brown surface dynamics toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string config_path;
    Overrides o;

    const auto add_base = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file")
            ->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory");
        return sub;
    };
    const auto add_seeded = [&](CLI::App* sub) {
        add_base(sub);
        sub->add_option("--seed", o.seed, "master RNG seed");
        sub->add_option("--n", o.n, "ensemble size");
        return sub;
    };
    const auto add_ensemble = [&](CLI::App* sub) {
        add_seeded(sub);
        sub->add_option("--p0", o.p0, "launch momentum magnitude");
        sub->add_option("--record", o.record, "trajectories written in full");
        sub->add_option("--workers", o.workers, "worker threads");
        return sub;
    };
    const auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--grid", o.grid, "wave grid as NXxNY");
        return sub;
    };
    const auto add_time = [&](CLI::App* sub) {
        sub->add_option("--dt", o.dt, "integration step");
        sub->add_option("--tfinal", o.tfinal, "propagation time");
        return sub;
    };

    add_base(app.add_subcommand("stationary", "locate minima and saddles"));
    add_base(app.add_subcommand("rp", "trace the reaction path"));
    add_seeded(app.add_subcommand("energy-diagram",
                                  "mean launch energy vs barrier heights"))
        ->add_option("--sweep", o.sweep, "p0 values")
        ->delimiter(',');
    add_time(add_ensemble(
        app.add_subcommand("classical", "classical ensembles, both samplings")));
    CLI::App* quantum = app.add_subcommand("quantum", "wave packet only");
    add_base(quantum);
    quantum->add_option("--p0", o.p0, "launch momentum magnitude");
    add_time(add_grid(quantum));
    add_time(add_grid(add_ensemble(
        app.add_subcommand("bohmian", "wave packet with flow trajectories"))));
    CLI::App* sweep = app.add_subcommand(
        "sweep", "product fraction vs p0, all three methods");
    add_seeded(sweep);
    sweep->add_option("--workers", o.workers, "worker threads");
    sweep->add_option("--sweep", o.sweep, "p0 values")->delimiter(',');
    sweep->add_option("--tfinal", o.tfinal, "propagation time");
    add_grid(sweep);
    add_time(add_ensemble(app.add_subcommand(
        "cara", "closeness of a reactive trajectory to the reaction path")));
    add_grid(add_ensemble(app.add_subcommand(
        "pairs", "classical vs flow trajectories from shared starts")));
    app.get_subcommand("pairs")->add_option("--tfinal", o.tfinal,
                                            "propagation time");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        RunConfig cfg =
            config_path.empty() ? RunConfig{} : load_config(config_path);
        apply_overrides(cfg, o, sub);
        if (const char* env = std::getenv("MBRX_OUT"); env && *env)
            cfg.out_dir = env;
        validate(cfg);
        fs::create_directories(cfg.out_dir);
        write_manifest(cfg.out_dir + "/manifest.json", cfg);

        if (sub == "stationary") return cmd_stationary(cfg);
        if (sub == "rp") return cmd_rp(cfg);
        if (sub == "energy-diagram") return cmd_energy_diagram(cfg);
        if (sub == "classical") return cmd_classical(cfg);
        if (sub == "quantum") return cmd_quantum(cfg);
        if (sub == "bohmian") return cmd_bohmian(cfg);
        if (sub == "sweep") return cmd_sweep(cfg);
        if (sub == "cara") return cmd_cara(cfg);
        if (sub == "pairs") return cmd_pairs(cfg);
        throw ConfigError("unknown subcommand " + sub);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
