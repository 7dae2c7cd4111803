#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mbrx/classical.hpp"
#include "mbrx/errors.hpp"
#include "mbrx/pes.hpp"

using namespace mbrx;

namespace {
const PesModel& pes() {
    static const PesModel model = PesModel::muller_brown();
    return model;
}
const MbStationarySet& mb() {
    static const MbStationarySet set = locate_mb_points(
        find_stationary_points(pes(), grid_seeds({-2.5, 1.5, -1.0, 2.5}, 16, 14)));
    return set;
}
}  // namespace

TEST_SUITE("classical") {

TEST_CASE("rho0 sampling: gaussian positions, sharp momenta") {
    EnsembleSpec spec{{0.6, 0.03}, 0.0125, {-4.0, 4.0}};
    GaussianRng rng(7);
    const int n = 100000;
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        const Sample s = sample_rho0(spec, rng);
        CHECK(s.momentum.x == -4.0);
        CHECK(s.momentum.y == 4.0);
        sx += s.position.x - spec.center.x;
        sy += s.position.y - spec.center.y;
        sxx += (s.position.x - spec.center.x) * (s.position.x - spec.center.x);
        syy += (s.position.y - spec.center.y) * (s.position.y - spec.center.y);
    }
    const double se_mean = std::sqrt(spec.sigma_sq / n);
    CHECK(std::abs(sx / n) < 4.0 * se_mean);
    CHECK(std::abs(sy / n) < 4.0 * se_mean);
    const double se_var = spec.sigma_sq * std::sqrt(2.0 / n);
    CHECK(std::abs(sxx / n - spec.sigma_sq) < 4.0 * se_var);
    CHECK(std::abs(syy / n - spec.sigma_sq) < 4.0 * se_var);
}

TEST_CASE("wigner sampling: minimum-uncertainty momentum spread") {
    EnsembleSpec spec{{0.6, 0.03}, 0.0125, {-4.0, 4.0}};
    GaussianRng rng(8);
    const int n = 100000;
    double spx = 0.0, spy = 0.0, vpx = 0.0, vpy = 0.0, cxp = 0.0;
    for (int i = 0; i < n; ++i) {
        const Sample s = sample_wigner(spec, rng);
        spx += s.momentum.x - spec.momentum.x;
        spy += s.momentum.y - spec.momentum.y;
        vpx += (s.momentum.x - spec.momentum.x) * (s.momentum.x - spec.momentum.x);
        vpy += (s.momentum.y - spec.momentum.y) * (s.momentum.y - spec.momentum.y);
        cxp += (s.position.x - spec.center.x) * (s.momentum.x - spec.momentum.x);
    }
    // Per-axis momentum variance hbar^2 / (4 sigma^2) = 20 for sigma^2 = 0.0125.
    const double target = 1.0 / (4.0 * spec.sigma_sq);
    CHECK(vpx / n == doctest::Approx(target).epsilon(0.1));
    CHECK(vpy / n == doctest::Approx(target).epsilon(0.1));
    CHECK(vpx / n == doctest::Approx(20.0).epsilon(0.1));
    const double se_mean = std::sqrt(target / n);
    CHECK(std::abs(spx / n) < 4.0 * se_mean);
    CHECK(std::abs(spy / n) < 4.0 * se_mean);
    // Position and momentum draws are uncorrelated.
    const double se_cov = std::sqrt(spec.sigma_sq * target / n);
    CHECK(std::abs(cxp / n) < 4.0 * se_cov);
}

TEST_CASE("recorded time grid is exact") {
    IntegratorOptions opts;
    opts.t_final = 50.0;
    const Trajectory traj =
        integrate_classical(pes(), {mb().m3.position, {-4.0, 4.0}}, opts);
    REQUIRE(traj.t.size() == 51);
    CHECK(traj.t[0] == 0.0);
    CHECK(traj.t[1] == 1.0);
    CHECK(traj.t[50] == 50.0);
    CHECK(traj.position.size() == traj.t.size());
    CHECK(traj.momentum.size() == traj.t.size());
    CHECK(traj.energy.size() == traj.t.size());
}

TEST_CASE("rejects time grids that do not close") {
    IntegratorOptions opts;
    opts.t_final = 50.05;
    CHECK_THROWS_AS(
        integrate_classical(pes(), {mb().m3.position, {-4.0, 4.0}}, opts),
        ConfigError);
}

TEST_CASE("energy is conserved over the full run") {
    const Sample ic{mb().m3.position, {-4.0, 4.0}};
    const Trajectory traj = integrate_classical(pes(), ic, {});
    const double e0 = traj.energy.front();
    double max_drift = 0.0;
    for (double e : traj.energy) max_drift = std::max(max_drift, std::abs(e - e0));
    CHECK(max_drift < 1e-6);
}

TEST_CASE("integration is time reversible") {
    IntegratorOptions opts;
    opts.t_final = 100.0;
    const Sample ic{{0.5, 0.1}, {-6.0, 5.0}};
    const Trajectory fwd = integrate_classical(pes(), ic, opts);
    const Sample back_ic{fwd.position.back(), -fwd.momentum.back()};
    const Trajectory back = integrate_classical(pes(), back_ic, opts);
    CHECK(distance(back.position.back(), ic.position) < 1e-9);
    CHECK(distance(back.momentum.back(), -ic.momentum) < 1e-9);
}

TEST_CASE("small oscillations near a minimum have the harmonic period") {
    const StationaryPoint& m1 = mb().m1;
    const double lambda = m1.eigenvalues[1];  // stiff mode
    const Vec2 v = m1.hessian.eigenvector(lambda);
    IntegratorOptions opts;
    const Sample ic{m1.position + v * 1e-4, {0.0, 0.0}};
    const Trajectory traj = integrate_classical(pes(), ic, opts);

    std::vector<double> crossings;
    double prev = dot(traj.position[0] - m1.position, v);
    for (std::size_t k = 1; k < traj.t.size(); ++k) {
        const double cur = dot(traj.position[k] - m1.position, v);
        if (prev * cur < 0.0) {
            const double w = prev / (prev - cur);
            crossings.push_back(traj.t[k - 1] + w * (traj.t[k] - traj.t[k - 1]));
        }
        prev = cur;
    }
    REQUIRE(crossings.size() >= 6);
    const double period =
        2.0 * (crossings.back() - crossings.front()) / (crossings.size() - 1);
    const double predicted = 2.0 * M_PI / std::sqrt(lambda / opts.mass);
    CHECK(period == doctest::Approx(predicted).epsilon(0.01));
}

TEST_CASE("ensemble results do not depend on the worker count") {
    ClassicalEnsembleOptions opts;
    opts.spec = {mb().m3.position, 0.0125, {-6.0, 6.0}};
    opts.sampling = Sampling::wigner;
    opts.count = 300;
    opts.seed = 99;
    opts.integrator.t_final = 50.0;
    opts.record_count = 5;

    opts.workers = 1;
    const auto a = run_classical_ensemble(pes(), opts);
    opts.workers = 3;
    const auto b = run_classical_ensemble(pes(), opts);

    REQUIRE(a.series.t.size() == b.series.t.size());
    for (std::size_t k = 0; k < a.series.t.size(); ++k) {
        CHECK(a.series.W[k] == b.series.W[k]);
        CHECK(a.series.Wbar[k] == b.series.Wbar[k]);
    }
    CHECK(a.mean_initial_energy == b.mean_initial_energy);
    REQUIRE(a.recorded.size() == 5);
    for (std::size_t k = 0; k < a.recorded[3].t.size(); ++k) {
        CHECK(a.recorded[3].position[k].x == b.recorded[3].position[k].x);
        CHECK(a.recorded[3].position[k].y == b.recorded[3].position[k].y);
    }
}

TEST_CASE("sub-barrier ensemble never reaches the product region") {
    // A narrow position spread keeps every sample's total energy well below
    // the barrier, so no trajectory can cross.
    ClassicalEnsembleOptions opts;
    opts.spec = {mb().m3.position, 5e-4, {-1.0, 1.0}};
    opts.sampling = Sampling::rho0;
    opts.count = 2000;
    opts.seed = 5;
    opts.integrator.t_final = 200.0;
    opts.record_count = opts.count;
    opts.workers = 2;
    const auto res = run_classical_ensemble(pes(), opts);

    const double barrier = mb().ts2.energy;
    for (const Trajectory& traj : res.recorded) {
        CHECK(traj.energy.front() < barrier);
        double max_drift = 0.0;
        for (double e : traj.energy)
            max_drift = std::max(max_drift, std::abs(e - traj.energy.front()));
        CHECK(max_drift < 1e-6);
    }
    for (double w : res.series.W) CHECK(w == 0.0);
    CHECK(res.series.Wbar.back() == 0.0);
}

TEST_CASE("reactive ensemble: estimator properties") {
    ClassicalEnsembleOptions opts;
    opts.spec = {mb().m3.position, 0.0125, {-9.0, 9.0}};
    opts.sampling = Sampling::rho0;
    opts.count = 500;
    opts.seed = 11;
    opts.integrator.t_final = 300.0;
    const auto res = run_classical_ensemble(pes(), opts);

    CHECK(res.series.W.front() == 0.0);
    CHECK(res.series.Wbar.front() == 0.0);
    for (std::size_t k = 1; k < res.series.Wbar.size(); ++k)
        CHECK(res.series.Wbar[k] >= res.series.Wbar[k - 1]);
    for (std::size_t k = 0; k < res.series.W.size(); ++k)
        CHECK(res.series.W[k] <= res.series.Wbar[k] + 1e-15);
    // At this launch momentum only the high-potential-energy tail of the
    // position distribution clears the second barrier, so the asymptotic
    // fraction is small but clearly nonzero.
    CHECK(res.series.Wbar.back() > 0.02);
}

TEST_CASE("energy diagram terms") {
    EnsembleSpec spec{mb().m3.position, 0.0125, {0.0, 0.0}};
    const auto diagram =
        mean_energy_diagram(pes(), spec, {0.0, 2.0, 4.0, 8.0}, 20000, 123);

    // Zero-point-like momentum-spread term hbar^2 / (4 m sigma^2).
    CHECK(diagram.delta == doctest::Approx(0.010893246187363833).epsilon(1e-12));
    // Distribution average of V, frozen from an independent Monte-Carlo run.
    CHECK(std::abs(diagram.V_mean - (-0.08912)) < 3.0 * (diagram.V_se + 6.5e-5));

    REQUIRE(diagram.rows.size() == 4);
    for (std::size_t i = 1; i < diagram.rows.size(); ++i)
        CHECK(diagram.rows[i].E_mean > diagram.rows[i - 1].E_mean);
    for (const auto& row : diagram.rows) {
        CHECK(row.E_mean_minus_delta ==
              doctest::Approx(row.E_mean - diagram.delta).epsilon(1e-12));
        CHECK(row.E_mean > row.E_point);  // spread only adds energy
    }
    CHECK(std::abs(diagram.rows[2].E_point - (-0.09945)) < 1e-5);
}

TEST_CASE("wigner ensemble mean energy matches the diagram") {
    ClassicalEnsembleOptions opts;
    opts.spec = {mb().m3.position, 0.0125, {-4.0, 4.0}};
    opts.sampling = Sampling::wigner;
    opts.count = 20000;
    opts.seed = 77;
    opts.integrator.t_final = 1.0;
    opts.integrator.stride = 1;
    const auto res = run_classical_ensemble(pes(), opts);

    const auto diagram =
        mean_energy_diagram(pes(), opts.spec, {4.0}, 20000, 78);
    const double tol =
        3.0 * std::sqrt(res.initial_energy_se * res.initial_energy_se +
                        diagram.V_se * diagram.V_se);
    CHECK(std::abs(res.mean_initial_energy - diagram.rows[0].E_mean) < tol);
}

}  // TEST_SUITE
