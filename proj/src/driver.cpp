#include "mbrx/driver.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "mbrx/errors.hpp"
#include "mbrx/parallel.hpp"
#include "mbrx/rng.hpp"
#include "mbrx/time_grid.hpp"

namespace mbrx {

QuantumEnsembleResult run_quantum_ensemble(const PesModel& model,
                                           const QuantumEnsembleOptions& o) {
    const GridSpec& grid = o.grid;
    const TimeGrid tg = make_time_grid(grid.dt, o.t_final, o.stride);

    const bool explicit_ics = !o.explicit_positions.empty();
    const long n = explicit_ics ? static_cast<long>(o.explicit_positions.size())
                                : o.count;
    if (n <= 0) throw ConfigError("particle count must be positive");
    const long record_count = std::min(o.record_count, n);

    WaveField field = initial_packet(grid, o.center, o.sigma_sq, o.momentum);
    SpectralOps ops(grid);
    const SplitOperator split(model, grid);
    VelocityBuilder builder(grid);
    builder.node_floor_fraction = o.node_floor_fraction;

    QuantumEnsembleResult result;
    result.initial_energy =
        kinetic_expectation(field, ops) + potential_expectation(field, model);
    result.recorded.resize(record_count);
    result.series.t.reserve(tg.n_samples);
    result.series.P.reserve(tg.n_samples);
    result.norm.reserve(tg.n_samples);

    std::vector<BohmianParticle> particles(n);
    std::vector<long> first_entry(n, -1);
    std::vector<std::atomic<long>> in_count(tg.n_samples);
    for (auto& c : in_count) c.store(0, std::memory_order_relaxed);

    VelocityField v_prev, v_cur;
    builder.build(field, ops, v_prev);

    const double sigma = std::sqrt(o.sigma_sq);
    parallel_for(n, o.workers, [&](std::size_t id) {
        BohmianParticle& p = particles[id];
        if (explicit_ics) {
            p.position = o.explicit_positions[id];
        } else {
            // Stream 0, two normal draws: identical to sample_rho0 positions.
            GaussianRng rng(substream_seed(o.seed, 0, id));
            p.position = {o.center.x + sigma * rng.next_normal(),
                          o.center.y + sigma * rng.next_normal()};
        }
        bool node = false;
        const Vec2 v = v_prev.sample(p.position, node);
        p.last_velocity = node ? Vec2{0.0, 0.0} : v;
    });

    // Membership, first-entry bookkeeping and optional full records for one
    // particle at sample k; field data for that instant is in `vf`.
    const auto observe_particle = [&](std::size_t id, long k,
                                      const VelocityField& vf) {
        BohmianParticle& p = particles[id];
        if (o.frontier.in_products(p.position)) {
            in_count[k].fetch_add(1, std::memory_order_relaxed);
            if (first_entry[id] < 0) first_entry[id] = k;
        }
        if (static_cast<long>(id) < record_count) {
            Trajectory& rec = result.recorded[id];
            const Vec2 mom = particle_momentum(p, vf, grid.mass);
            rec.t.push_back(k * tg.sample_dt);
            rec.position.push_back(p.position);
            rec.momentum.push_back(mom);
            rec.energy.push_back(norm_sq(mom) / (2.0 * grid.mass) +
                                 model.value(p.position));
            rec.node_clamps.push_back(p.node_clamps);
        }
    };

    const auto observe_field = [&](long k) {
        result.series.t.push_back(k * tg.sample_dt);
        result.series.P.push_back(restricted_norm(field, o.frontier));
        const double nrm = field_norm(field);
        result.norm.push_back(nrm);
        result.max_norm_drift = std::max(result.max_norm_drift, std::abs(nrm - 1.0));
        const double leak = edge_norm(field, o.leak_band) / nrm;
        result.max_leak_fraction = std::max(result.max_leak_fraction, leak);
        if (leak > o.leak_error_fraction)
            throw BoundaryLeak("edge band holds " + std::to_string(leak) +
                               " of the norm at t = " + std::to_string(field.t));
        if (leak > o.leak_warn_fraction) ++result.leak_warnings;
        for (long s : o.snapshot_samples)
            if (s == k) {
                result.field_snapshots.push_back(field);
                std::vector<Vec2> positions(n);
                for (long id = 0; id < n; ++id)
                    positions[id] = particles[id].position;
                result.particle_snapshots.push_back(std::move(positions));
            }
    };

    for (long id = 0; id < record_count; ++id) result.recorded[id].id = id;
    observe_field(0);
    parallel_for(n, o.workers,
                 [&](std::size_t id) { observe_particle(id, 0, v_prev); });

    for (long step = 1; step <= tg.n_steps; ++step) {
        split.step(field, ops);
        builder.build(field, ops, v_cur);
        const bool sampling = step % o.stride == 0;
        const long k = step / o.stride;
        parallel_for(n, o.workers, [&](std::size_t id) {
            advance_particle(particles[id], v_prev, v_cur, o.node_policy);
            if (sampling) observe_particle(id, k, v_cur);
        });
        if (sampling) observe_field(k);
        std::swap(v_prev, v_cur);
    }

    result.series.W.resize(tg.n_samples);
    result.series.Wbar.resize(tg.n_samples);
    std::vector<long> entry_hist(tg.n_samples, 0);
    for (long id = 0; id < n; ++id)
        if (first_entry[id] >= 0) ++entry_hist[first_entry[id]];
    long entered = 0;
    for (long k = 0; k < tg.n_samples; ++k) {
        entered += entry_hist[k];
        result.series.W[k] = double(in_count[k].load()) / double(n);
        result.series.Wbar[k] = double(entered) / double(n);
    }
    for (const auto& p : particles) {
        result.total_node_clamps += p.node_clamps;
        result.max_node_clamps = std::max(result.max_node_clamps, p.node_clamps);
    }
    return result;
}

Trajectory integrate_bohmian(const PesModel& model,
                             QuantumEnsembleOptions options, Vec2 start) {
    options.explicit_positions = {start};
    options.record_count = 1;
    QuantumEnsembleResult result = run_quantum_ensemble(model, options);
    return std::move(result.recorded.front());
}

}  // namespace mbrx
