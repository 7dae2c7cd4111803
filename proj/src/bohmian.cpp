#include "mbrx/bohmian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mbrx/errors.hpp"

namespace mbrx {

Vec2 VelocityField::sample(Vec2 pos, bool& node_hit) const {
    if (!grid.extent.contains(pos))
        throw OutOfGrid("particle at (" + std::to_string(pos.x) + ", " +
                        std::to_string(pos.y) + ") left the grid at t = " +
                        std::to_string(t));
    const double u = (pos.x - grid.extent.x_min) / grid.dx() - 0.5;
    const double w = (pos.y - grid.extent.y_min) / grid.dy() - 0.5;
    const int i0 = std::clamp(static_cast<int>(std::floor(u)), 0, grid.nx - 2);
    const int j0 = std::clamp(static_cast<int>(std::floor(w)), 0, grid.ny - 2);
    const double fx = std::clamp(u - i0, 0.0, 1.0);
    const double fy = std::clamp(w - j0, 0.0, 1.0);

    const long i00 = grid.index(i0, j0);
    const long i10 = grid.index(i0 + 1, j0);
    const long i01 = grid.index(i0, j0 + 1);
    const long i11 = grid.index(i0 + 1, j0 + 1);
    if (node[i00] || node[i10] || node[i01] || node[i11]) node_hit = true;
    return v[i00] * ((1.0 - fx) * (1.0 - fy)) + v[i10] * (fx * (1.0 - fy)) +
           v[i01] * ((1.0 - fx) * fy) + v[i11] * (fx * fy);
}

VelocityBuilder::VelocityBuilder(const GridSpec& grid)
    : grid_(grid), psi_k_(grid.size()), gx_(grid.size()), gy_(grid.size()) {}

void VelocityBuilder::build(const WaveField& field, const SpectralOps& ops,
                            VelocityField& out) const {
    if (!(field.grid == grid_))
        throw PreconditionError("field grid does not match the builder grid");
    const GridSpec& g = grid_;
    const long n = g.size();

    psi_k_ = field.amp;
    ops.forward(psi_k_);
    const double inv_n = 1.0 / n;
    for (int j = 0; j < g.ny; ++j) {
        const double ky = g.ky(j);
        for (int i = 0; i < g.nx; ++i) {
            const long idx = g.index(i, j);
            const std::complex<double> scaled = psi_k_[idx] * inv_n;
            gx_[idx] = std::complex<double>(0.0, g.kx(i)) * scaled;
            gy_[idx] = std::complex<double>(0.0, ky) * scaled;
        }
    }
    ops.inverse(gx_);
    ops.inverse(gy_);

    double rho_peak = 0.0;
    for (long idx = 0; idx < n; ++idx)
        rho_peak = std::max(rho_peak, std::norm(field.amp[idx]));
    const double floor = node_floor_fraction * rho_peak;

    out.grid = g;
    out.t = field.t;
    out.v.resize(n);
    out.node.assign(n, 0);
    const double scale = g.hbar / g.mass;
    for (long idx = 0; idx < n; ++idx) {
        const double rho = std::norm(field.amp[idx]);
        if (rho < floor) {
            out.node[idx] = 1;
            out.v[idx] = {0.0, 0.0};
            continue;
        }
        // Im(grad psi / psi) = Im(conj(psi) grad psi) / rho.
        const std::complex<double> c = std::conj(field.amp[idx]);
        out.v[idx] = {scale * std::imag(c * gx_[idx]) / rho,
                      scale * std::imag(c * gy_[idx]) / rho};
    }
}

QuantumPotentialField quantum_potential(const WaveField& field,
                                        const SpectralOps& ops,
                                        double node_floor_fraction) {
    const GridSpec& g = field.grid;
    const long n = g.size();
    cvector rho_k(n), dx_rho(n), dy_rho(n), lap_rho(n);

    double rho_peak = 0.0;
    for (long idx = 0; idx < n; ++idx) {
        const double rho = std::norm(field.amp[idx]);
        rho_k[idx] = rho;
        rho_peak = std::max(rho_peak, rho);
    }
    ops.forward(rho_k);
    const double inv_n = 1.0 / n;
    for (int j = 0; j < g.ny; ++j) {
        const double ky = g.ky(j);
        for (int i = 0; i < g.nx; ++i) {
            const long idx = g.index(i, j);
            const double kx = g.kx(i);
            const std::complex<double> scaled = rho_k[idx] * inv_n;
            dx_rho[idx] = std::complex<double>(0.0, kx) * scaled;
            dy_rho[idx] = std::complex<double>(0.0, ky) * scaled;
            lap_rho[idx] = -(kx * kx + ky * ky) * scaled;
        }
    }
    ops.inverse(dx_rho);
    ops.inverse(dy_rho);
    ops.inverse(lap_rho);

    QuantumPotentialField out;
    out.grid = g;
    out.t = field.t;
    out.q.resize(n);
    out.node.assign(n, 0);
    const double floor = node_floor_fraction * rho_peak;
    const double coeff = g.hbar * g.hbar / (4.0 * g.mass);
    for (long idx = 0; idx < n; ++idx) {
        const double rho = std::norm(field.amp[idx]);
        if (rho < floor) {
            out.node[idx] = 1;
            out.q[idx] = 0.0;
            continue;
        }
        const double gx = std::real(dx_rho[idx]);
        const double gy = std::real(dy_rho[idx]);
        const double lap = std::real(lap_rho[idx]);
        out.q[idx] =
            coeff * (0.5 * (gx * gx + gy * gy) / (rho * rho) - lap / rho);
    }
    return out;
}

namespace {

struct FieldPair {
    const VelocityField& v0;
    const VelocityField& v1;
    double dt;

    // Linear interpolation in time; w is the fraction across [v0.t, v1.t].
    Vec2 at(Vec2 x, double w, bool& node_hit) const {
        const Vec2 a = v0.sample(x, node_hit);
        const Vec2 b = v1.sample(x, node_hit);
        return a * (1.0 - w) + b * w;
    }
};

bool try_midpoint(const FieldPair& pair, Vec2 x, double w_start, double h,
                  Vec2& x_out, Vec2& v_used) {
    bool node = false;
    const Vec2 k1 = pair.at(x, w_start, node);
    if (node) return false;
    const Vec2 x_mid = x + k1 * (0.5 * h);
    const double w_mid = w_start + 0.5 * h / pair.dt;
    const Vec2 v_mid = pair.at(x_mid, w_mid, node);
    if (node) return false;
    x_out = x + v_mid * h;
    v_used = v_mid;
    return true;
}

void advance_segment(BohmianParticle& p, const FieldPair& pair, double w_start,
                     double h, int depth, const NodePolicy& policy) {
    Vec2 x_out, v_used;
    if (try_midpoint(pair, p.position, w_start, h, x_out, v_used)) {
        p.position = x_out;
        p.last_velocity = v_used;
        return;
    }
    if (depth >= policy.max_refines) {
        p.position += p.last_velocity * h;
        ++p.node_clamps;
        return;
    }
    const double h_sub = h / policy.substeps;
    for (int s = 0; s < policy.substeps; ++s)
        advance_segment(p, pair, w_start + s * h_sub / pair.dt, h_sub,
                        depth + 1, policy);
}

}  // namespace

void advance_particle(BohmianParticle& particle, const VelocityField& v0,
                      const VelocityField& v1, const NodePolicy& policy) {
    const double dt = v1.t - v0.t;
    if (dt <= 0.0) throw PreconditionError("velocity fields out of order");
    const FieldPair pair{v0, v1, dt};
    advance_segment(particle, pair, 0.0, dt, 0, policy);
}

Vec2 particle_momentum(const BohmianParticle& particle, const VelocityField& vf,
                       double mass) {
    bool node = false;
    const Vec2 v = vf.sample(particle.position, node);
    return (node ? particle.last_velocity : v) * mass;
}

}  // namespace mbrx
