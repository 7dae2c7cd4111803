#ifndef MBRX_DRIVER_HPP
#define MBRX_DRIVER_HPP

#include <cstdint>
#include <vector>

#include "mbrx/bohmian.hpp"
#include "mbrx/classical.hpp"
#include "mbrx/grid.hpp"
#include "mbrx/pes.hpp"
#include "mbrx/quantum.hpp"
#include "mbrx/series.hpp"

namespace mbrx {

struct QuantumEnsembleOptions {
    GridSpec grid;  // carries dt, mass and hbar
    Vec2 center;
    double sigma_sq = 0.0125;
    Vec2 momentum;
    long count = 50000;
    std::uint64_t seed = 1;
    double t_final = 700.0;
    int stride = 20;
    FrontierLine frontier;
    int workers = 1;
    long record_count = 0;
    int leak_band = 3;
    double leak_warn_fraction = 1e-6;
    double leak_error_fraction = 1e-3;
    NodePolicy node_policy;
    double node_floor_fraction = 1e-12;
    // Sample indices at which to keep the field and every particle position.
    std::vector<long> snapshot_samples;
    // When non-empty these positions replace the sampled ones and `count`
    // is ignored.
    std::vector<Vec2> explicit_positions;
};

struct QuantumEnsembleResult {
    ProbabilitySeries series;          // t, P, W, Wbar
    std::vector<Trajectory> recorded;  // momenta are m * v(x(t), t)
    std::vector<double> norm;          // per sample
    double max_norm_drift = 0.0;
    double max_leak_fraction = 0.0;
    int leak_warnings = 0;
    long total_node_clamps = 0;
    long max_node_clamps = 0;  // worst single trajectory
    double initial_energy = 0.0;
    std::vector<WaveField> field_snapshots;
    std::vector<std::vector<Vec2>> particle_snapshots;
};

// Wave propagation with a flow-following particle ensemble on top. Particle
// positions are drawn from the packet's position density with the same
// substreams as the classical rho0 ensemble, so runs with equal seeds pair
// particle i with classical trajectory i at the same starting point. P comes
// from the field, W and Wbar from the particles, all on the common sample
// grid t_k = k * stride * dt.
QuantumEnsembleResult run_quantum_ensemble(const PesModel& model,
                                           const QuantumEnsembleOptions& options);

// Single trajectory from an explicit start, full record returned.
Trajectory integrate_bohmian(const PesModel& model,
                             QuantumEnsembleOptions options, Vec2 start);

}  // namespace mbrx

#endif
