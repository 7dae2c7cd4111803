#include "mbrx/classical.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

#include "mbrx/errors.hpp"
#include "mbrx/parallel.hpp"
#include "mbrx/time_grid.hpp"

namespace mbrx {

Sample sample_rho0(const EnsembleSpec& spec, GaussianRng& rng) {
    const double sigma = std::sqrt(spec.sigma_sq);
    Sample s;
    s.position = {spec.center.x + sigma * rng.next_normal(),
                  spec.center.y + sigma * rng.next_normal()};
    s.momentum = spec.momentum;
    return s;
}

Sample sample_wigner(const EnsembleSpec& spec, GaussianRng& rng, double hbar) {
    const double sigma = std::sqrt(spec.sigma_sq);
    Sample s;
    s.position = {spec.center.x + sigma * rng.next_normal(),
                  spec.center.y + sigma * rng.next_normal()};
    const double sigma_p = hbar / (2.0 * sigma);
    s.momentum = {spec.momentum.x + sigma_p * rng.next_normal(),
                  spec.momentum.y + sigma_p * rng.next_normal()};
    return s;
}

double sample_energy(const PesModel& model, const Sample& s, double mass) {
    return norm_sq(s.momentum) / (2.0 * mass) + model.value(s.position);
}

namespace {

TimeGrid make_grid(const IntegratorOptions& o) {
    if (o.mass <= 0.0) throw ConfigError("mass must be positive");
    return make_time_grid(o.dt, o.t_final, o.stride);
}

// Velocity Verlet core; `on_sample(k, t, x, p)` fires every stride-th step.
template <typename OnSample>
void run_verlet(const PesModel& model, const Sample& ic,
                const IntegratorOptions& o, const TimeGrid& grid,
                OnSample&& on_sample) {
    Vec2 x = ic.position;
    Vec2 p = ic.momentum;
    Vec2 f = -model.gradient(x);
    for (long step = 0;; ++step) {
        if (step % o.stride == 0) {
            const long k = step / o.stride;
            on_sample(k, k * grid.sample_dt, x, p);
        }
        if (step == grid.n_steps) break;
        const Vec2 p_half = p + f * (0.5 * o.dt);
        x += p_half * (o.dt / o.mass);
        f = -model.gradient(x);
        p = p_half + f * (0.5 * o.dt);
    }
}

}  // namespace

Trajectory integrate_classical(const PesModel& model, const Sample& ic,
                               const IntegratorOptions& options, long id) {
    const TimeGrid grid = make_grid(options);
    Trajectory traj;
    traj.id = id;
    traj.t.reserve(grid.n_samples);
    traj.position.reserve(grid.n_samples);
    traj.momentum.reserve(grid.n_samples);
    traj.energy.reserve(grid.n_samples);
    run_verlet(model, ic, options, grid, [&](long, double t, Vec2 x, Vec2 p) {
        traj.t.push_back(t);
        traj.position.push_back(x);
        traj.momentum.push_back(p);
        traj.energy.push_back(norm_sq(p) / (2.0 * options.mass) + model.value(x));
    });
    return traj;
}

ClassicalEnsembleResult run_classical_ensemble(const PesModel& model,
                                               const ClassicalEnsembleOptions& options) {
    if (options.count <= 0) throw ConfigError("ensemble count must be positive");
    const TimeGrid grid = make_grid(options.integrator);
    const long n = options.count;
    const long n_rec = grid.n_samples;
    const long record_count = std::min(options.record_count, n);

    std::vector<std::atomic<long>> in_count(n_rec);
    for (auto& c : in_count) c.store(0, std::memory_order_relaxed);
    std::vector<long> first_entry(n, -1);
    std::vector<double> energies(n);
    ClassicalEnsembleResult result;
    result.recorded.resize(record_count);

    const std::uint64_t stream = static_cast<std::uint64_t>(options.sampling);
    parallel_for(n, options.workers, [&](std::size_t id) {
        GaussianRng rng(substream_seed(options.seed, stream, id));
        const Sample ic = options.sampling == Sampling::rho0
                              ? sample_rho0(options.spec, rng)
                              : sample_wigner(options.spec, rng, options.hbar);
        energies[id] = sample_energy(model, ic, options.integrator.mass);
        Trajectory* rec = static_cast<long>(id) < record_count
                              ? &result.recorded[id]
                              : nullptr;
        if (rec) rec->id = static_cast<long>(id);
        long entry = -1;
        run_verlet(model, ic, options.integrator, grid,
                   [&](long k, double t, Vec2 x, Vec2 p) {
                       // A straight segment between samples cannot cross the
                       // frontier line and return, so membership at the
                       // recorded samples captures every entry.
                       if (options.frontier.in_products(x)) {
                           in_count[k].fetch_add(1, std::memory_order_relaxed);
                           if (entry < 0) entry = k;
                       }
                       if (rec) {
                           rec->t.push_back(t);
                           rec->position.push_back(x);
                           rec->momentum.push_back(p);
                           rec->energy.push_back(
                               norm_sq(p) / (2.0 * options.integrator.mass) +
                               model.value(x));
                       }
                   });
        first_entry[id] = entry;
    });

    result.series.t.resize(n_rec);
    result.series.W.resize(n_rec);
    result.series.Wbar.resize(n_rec);
    std::vector<long> entry_hist(n_rec, 0);
    for (long id = 0; id < n; ++id)
        if (first_entry[id] >= 0) ++entry_hist[first_entry[id]];
    long entered = 0;
    for (long k = 0; k < n_rec; ++k) {
        entered += entry_hist[k];
        result.series.t[k] = k * grid.sample_dt;
        result.series.W[k] = double(in_count[k].load()) / double(n);
        result.series.Wbar[k] = double(entered) / double(n);
    }

    double sum = 0.0;
    for (double e : energies) sum += e;
    const double mean = sum / n;
    double var = 0.0;
    for (double e : energies) var += (e - mean) * (e - mean);
    var = n > 1 ? var / (n - 1) : 0.0;
    result.mean_initial_energy = mean;
    result.initial_energy_se = std::sqrt(var / n);
    return result;
}

EnergyDiagram mean_energy_diagram(const PesModel& model, const EnsembleSpec& spec,
                                  const std::vector<double>& p0_values, long count,
                                  std::uint64_t seed, double mass, double hbar) {
    if (count <= 0) throw ConfigError("sample count must be positive");
    EnergyDiagram diagram;
    // Position-distribution average of V; independent of p0, computed once.
    const double sigma = std::sqrt(spec.sigma_sq);
    double sum = 0.0, sum2 = 0.0;
    for (long i = 0; i < count; ++i) {
        GaussianRng rng(substream_seed(seed, 2, i));
        const Vec2 x{spec.center.x + sigma * rng.next_normal(),
                     spec.center.y + sigma * rng.next_normal()};
        const double v = model.value(x);
        sum += v;
        sum2 += v * v;
    }
    diagram.V_mean = sum / count;
    const double var =
        count > 1 ? (sum2 - sum * sum / count) / (count - 1) : 0.0;
    diagram.V_se = std::sqrt(var / count);
    diagram.delta = hbar * hbar / (4.0 * mass * spec.sigma_sq);

    const double v_center = model.value(spec.center);
    for (double p0 : p0_values) {
        EnergyDiagramRow row;
        row.p0 = p0;
        // Momentum mean (-p0, p0) carries kinetic energy p0^2 / mass.
        row.E_mean = p0 * p0 / mass + diagram.V_mean + diagram.delta;
        row.E_mean_minus_delta = row.E_mean - diagram.delta;
        row.E_point = p0 * p0 / mass + v_center;
        diagram.rows.push_back(row);
    }
    return diagram;
}

}  // namespace mbrx
