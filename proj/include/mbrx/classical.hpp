#ifndef MBRX_CLASSICAL_HPP
#define MBRX_CLASSICAL_HPP

#include <cstdint>
#include <vector>

#include "mbrx/pes.hpp"
#include "mbrx/rng.hpp"
#include "mbrx/series.hpp"
#include "mbrx/vec.hpp"

namespace mbrx {

// Initial phase-space distribution: positions are Gaussian around `center`
// with per-axis variance sigma_sq; momenta are either sharp at `momentum`
// (rho0) or Gaussian around it with the minimum-uncertainty spread
// hbar^2 / (4 sigma_sq) per axis (wigner).
struct EnsembleSpec {
    Vec2 center;
    double sigma_sq = 0.0125;
    Vec2 momentum;
};

enum class Sampling { rho0, wigner };

struct Sample {
    Vec2 position;
    Vec2 momentum;
};

// Draw order per sample: x, y, then (wigner only) px, py.
Sample sample_rho0(const EnsembleSpec& spec, GaussianRng& rng);
Sample sample_wigner(const EnsembleSpec& spec, GaussianRng& rng, double hbar = 1.0);

struct IntegratorOptions {
    double dt = 0.1;
    double t_final = 700.0;
    int stride = 10;  // record every stride-th step
    double mass = 1836.0;
};

struct Trajectory {
    long id = 0;
    std::vector<double> t;
    std::vector<Vec2> position;
    std::vector<Vec2> momentum;
    std::vector<double> energy;
    // Cumulative count of velocity clamps near wave-function nodes; filled by
    // the quantum-trajectory propagator, empty for classical runs.
    std::vector<long> node_clamps;
};

double sample_energy(const PesModel& model, const Sample& s, double mass);

// Velocity Verlet on the surface; states are recorded every `stride` steps,
// including the initial one, with t_k = k * (stride * dt).
Trajectory integrate_classical(const PesModel& model, const Sample& ic,
                               const IntegratorOptions& options, long id = 0);

struct ClassicalEnsembleOptions {
    EnsembleSpec spec;
    Sampling sampling = Sampling::rho0;
    long count = 50000;
    std::uint64_t seed = 1;
    IntegratorOptions integrator;
    FrontierLine frontier;
    int workers = 1;
    long record_count = 0;  // trajectories with id below this keep full records
    double hbar = 1.0;
};

struct ClassicalEnsembleResult {
    ProbabilitySeries series;  // t, W, Wbar
    std::vector<Trajectory> recorded;
    double mean_initial_energy = 0.0;
    double initial_energy_se = 0.0;
};

// Propagates `count` independent samples and accumulates W / Wbar on the
// recorded time grid. Results are bit-identical for any worker count: each
// particle has its own random substream and all reductions are either exact
// integer counts or sequential.
ClassicalEnsembleResult run_classical_ensemble(const PesModel& model,
                                               const ClassicalEnsembleOptions& options);

// Mean total energy of the wigner ensemble as a function of the launch
// momentum magnitude p0 (momentum mean (-p0, p0)): kinetic p0^2/m plus the
// Monte-Carlo average of V over the position distribution plus the
// momentum-spread term hbar^2 / (4 m sigma_sq). E_point is the energy of a
// point particle started at `center` with the same momentum.
struct EnergyDiagramRow {
    double p0;
    double E_mean;
    double E_mean_minus_delta;
    double E_point;
};

struct EnergyDiagram {
    double V_mean = 0.0;
    double V_se = 0.0;
    double delta = 0.0;
    std::vector<EnergyDiagramRow> rows;
};

EnergyDiagram mean_energy_diagram(const PesModel& model, const EnsembleSpec& spec,
                                  const std::vector<double>& p0_values, long count,
                                  std::uint64_t seed, double mass = 1836.0,
                                  double hbar = 1.0);

}  // namespace mbrx

#endif
