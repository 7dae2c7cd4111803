#include <cmath>

#include "doctest.h"
#include "mbrx/bohmian.hpp"
#include "mbrx/errors.hpp"
#include "mbrx/quantum.hpp"

using namespace mbrx;

namespace {

GridSpec mb_grid_256() {
    GridSpec g;
    g.nx = 256;
    g.ny = 256;
    return g;
}

VelocityField uniform_field(const GridSpec& g, Vec2 v, double t) {
    VelocityField f;
    f.grid = g;
    f.t = t;
    f.v.assign(g.size(), v);
    f.node.assign(g.size(), 0);
    return f;
}

GridSpec unit_grid() {
    GridSpec g;
    g.extent = {0.0, 1.0, 0.0, 1.0};
    g.nx = 32;
    g.ny = 32;
    g.dt = 1.0;
    return g;
}

}  // namespace

TEST_SUITE("bohmian") {

TEST_CASE("boosted packet flows at p/m everywhere near the center") {
    GridSpec g = mb_grid_256();
    SpectralOps ops(g);
    const Vec2 center{0.6, 0.03};
    const Vec2 p{-4.0, 4.0};
    const double sigma_sq = 0.0125;
    const WaveField field = initial_packet(g, center, sigma_sq, p);

    VelocityBuilder builder(g);
    VelocityField vf;
    builder.build(field, ops, vf);
    CHECK(vf.t == field.t);

    const Vec2 expected = p * (1.0 / g.mass);
    const double sigma = std::sqrt(sigma_sq);
    double max_err = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const Vec2 r{g.x(i), g.y(j)};
            if (distance(r, center) > 2.0 * sigma) continue;
            CHECK_FALSE(vf.node[g.index(i, j)]);
            max_err = std::max(max_err, distance(vf.v[g.index(i, j)], expected));
        }
    }
    CHECK(max_err < 1e-6);
}

TEST_CASE("quantum potential of a gaussian matches the closed form") {
    GridSpec g = mb_grid_256();
    SpectralOps ops(g);
    const Vec2 center{0.6, 0.03};
    const double sigma_sq = 0.0125;
    const WaveField plain = initial_packet(g, center, sigma_sq, {0.0, 0.0});
    const QuantumPotentialField qf = quantum_potential(plain, ops);

    // For rho ~ exp(-r^2 / 2 sigma^2):
    // Q(r) = (hbar^2/4m) (2/sigma^2 - r^2 / 2 sigma^4).
    const double coeff = 1.0 / (4.0 * g.mass);
    const double sigma = std::sqrt(sigma_sq);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const Vec2 r{g.x(i), g.y(j)};
            if (distance(r, center) > 2.0 * sigma) continue;
            const double r_sq = norm_sq(r - center);
            const double expected =
                coeff * (2.0 / sigma_sq - r_sq / (2.0 * sigma_sq * sigma_sq));
            CHECK(qf.q[g.index(i, j)] ==
                  doctest::Approx(expected).epsilon(1e-6));
        }
    }
    // Center value hbar^2 / (2 m sigma^2).
    const int ic = static_cast<int>(std::llround((center.x - g.extent.x_min) / g.dx() - 0.5));
    const int jc = static_cast<int>(std::llround((center.y - g.extent.y_min) / g.dy() - 0.5));
    const double center_r_sq = norm_sq(Vec2{g.x(ic), g.y(jc)} - center);
    CHECK(qf.q[g.index(ic, jc)] ==
          doctest::Approx(coeff * (2.0 / sigma_sq -
                                   center_r_sq / (2.0 * sigma_sq * sigma_sq)))
              .epsilon(1e-8));

    // The phase does not enter the density, so a boosted packet has the
    // same quantum potential.
    const WaveField boosted = initial_packet(g, center, sigma_sq, {-4.0, 4.0});
    const QuantumPotentialField qb = quantum_potential(boosted, ops);
    CHECK(std::abs(qb.q[g.index(ic, jc)] - qf.q[g.index(ic, jc)]) < 1e-9);
}

TEST_CASE("bilinear sampling reproduces a linear flow exactly") {
    GridSpec g = unit_grid();
    VelocityField f = uniform_field(g, {0.0, 0.0}, 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f.v[g.index(i, j)] = {g.x(i), -2.0 * g.y(j)};

    bool node = false;
    const Vec2 a = f.sample({0.41, 0.37}, node);
    CHECK_FALSE(node);
    CHECK(a.x == doctest::Approx(0.41).epsilon(1e-12));
    CHECK(a.y == doctest::Approx(-0.74).epsilon(1e-12));
    const Vec2 b = f.sample({0.0625, 0.9375}, node);  // exactly on centers
    CHECK(b.x == doctest::Approx(0.0625).epsilon(1e-12));
    CHECK(b.y == doctest::Approx(-1.875).epsilon(1e-12));
}

TEST_CASE("sampling outside the extents throws") {
    GridSpec g = unit_grid();
    const VelocityField f = uniform_field(g, {0.0, 0.0}, 0.0);
    bool node = false;
    CHECK_THROWS_AS(f.sample({1.5, 0.5}, node), OutOfGrid);
}

TEST_CASE("node region is traversed by clamped steps") {
    GridSpec g = unit_grid();
    const Vec2 v{0.25, 0.0};
    VelocityField v0 = uniform_field(g, v, 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (std::abs(g.x(i) - 0.5) < 0.0625) v0.node[g.index(i, j)] = 1;
    VelocityField v1 = v0;
    v1.t = 1.0;

    BohmianParticle crossing;
    crossing.position = {0.3, 0.5};
    advance_particle(crossing, v0, v1, {});
    // The flow is uniform, so clamped sub-steps reuse the same velocity and
    // the net displacement is exact.
    CHECK(crossing.position.x == doctest::Approx(0.55).epsilon(1e-9));
    CHECK(crossing.position.y == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(crossing.node_clamps > 100);

    BohmianParticle clear;
    clear.position = {0.1, 0.2};
    advance_particle(clear, v0, v1, {});
    CHECK(clear.node_clamps == 0);
    CHECK(clear.position.x == doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("stepping off the grid throws") {
    GridSpec g = unit_grid();
    const VelocityField v0 = uniform_field(g, {1.0, 0.0}, 0.0);
    VelocityField v1 = v0;
    v1.t = 1.0;
    BohmianParticle p;
    p.position = {0.9, 0.5};
    CHECK_THROWS_AS(advance_particle(p, v0, v1, {}), OutOfGrid);
}

TEST_CASE("free-packet trajectories follow the spreading law") {
    const PesModel free_model({}, 1.0);
    GridSpec g;
    g.extent = {-6.0, 6.0, -6.0, 6.0};
    g.nx = 256;
    g.ny = 256;
    g.dt = 0.5;
    SpectralOps ops(g);
    const double sigma_sq = 0.0125;
    WaveField field = initial_packet(g, {0.0, 0.0}, sigma_sq, {0.0, 0.0});
    const SplitOperator split(free_model, g);
    VelocityBuilder builder(g);

    std::vector<BohmianParticle> particles(3);
    particles[0].position = {0.1, -0.05};
    particles[1].position = {-0.15, 0.1};
    particles[2].position = {0.05, 0.15};
    const std::vector<Vec2> offsets = {particles[0].position,
                                       particles[1].position,
                                       particles[2].position};

    VelocityField prev, cur;
    builder.build(field, ops, prev);
    const double t_final = 100.0;
    const long n_steps = std::llround(t_final / g.dt);
    for (long step = 1; step <= n_steps; ++step) {
        split.step(field, ops);
        builder.build(field, ops, cur);
        for (auto& p : particles) advance_particle(p, prev, cur, {});
        std::swap(prev, cur);
    }

    // Along the spreading flow every trajectory scales with the width:
    // x(t) = x(0) * sigma(t) / sigma(0).
    const double factor = std::sqrt(
        1.0 + std::pow(t_final / (2.0 * g.mass * sigma_sq), 2));
    for (std::size_t i = 0; i < particles.size(); ++i) {
        const Vec2 expected = offsets[i] * factor;
        CHECK(particles[i].position.x ==
              doctest::Approx(expected.x).epsilon(0.01));
        CHECK(particles[i].position.y ==
              doctest::Approx(expected.y).epsilon(0.01));
        CHECK(particles[i].node_clamps == 0);
    }
}

}  // TEST_SUITE
