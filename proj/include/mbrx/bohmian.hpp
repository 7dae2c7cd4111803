#ifndef MBRX_BOHMIAN_HPP
#define MBRX_BOHMIAN_HPP

#include <cstdint>
#include <vector>

#include "mbrx/grid.hpp"
#include "mbrx/quantum.hpp"
#include "mbrx/vec.hpp"

namespace mbrx {

// Flow field v = (hbar/m) Im(grad psi / psi) tabulated on the grid at one
// instant. Cells whose density is below node_floor_fraction of the peak are
// flagged; their velocity is meaningless and the stepper must not use it.
struct VelocityField {
    GridSpec grid;
    std::vector<Vec2> v;
    std::vector<std::uint8_t> node;
    double t = 0.0;

    // Bilinear interpolation between cell centers (clamped at the border
    // cells). node_hit is set if any corner of the enclosing cell patch is
    // flagged. Throws OutOfGrid for positions outside the extents.
    Vec2 sample(Vec2 pos, bool& node_hit) const;
};

// Builds velocity fields via spectral differentiation; owns the scratch
// buffers so the per-step cost is one forward and two inverse FFTs.
class VelocityBuilder {
  public:
    explicit VelocityBuilder(const GridSpec& grid);

    double node_floor_fraction = 1e-12;

    void build(const WaveField& field, const SpectralOps& ops,
               VelocityField& out) const;

  private:
    GridSpec grid_;
    mutable cvector psi_k_, gx_, gy_;
};

// Q = (hbar^2 / 4m) [ (1/2) |grad rho|^2 / rho^2 - laplacian(rho) / rho ]
// from spectral derivatives of the density. Flagged cells carry q = 0.
struct QuantumPotentialField {
    GridSpec grid;
    std::vector<double> q;
    std::vector<std::uint8_t> node;
    double t = 0.0;
};

QuantumPotentialField quantum_potential(const WaveField& field,
                                        const SpectralOps& ops,
                                        double node_floor_fraction = 1e-12);

// When a step runs into flagged cells it is retried as `substeps` shorter
// steps, up to `max_refines` times; a sub-interval that still fails at full
// depth advances with the particle's last valid velocity and is counted.
struct NodePolicy {
    int substeps = 10;
    int max_refines = 3;
};

struct BohmianParticle {
    Vec2 position;
    Vec2 last_velocity;
    long node_clamps = 0;
};

// Moves the particle from v0.t to v1.t with an explicit midpoint step;
// velocities between the two field snapshots are interpolated linearly in
// time. Updates last_velocity after every clean step.
void advance_particle(BohmianParticle& particle, const VelocityField& v0,
                      const VelocityField& v1, const NodePolicy& policy);

// m * v at the particle position; falls back to the last valid velocity
// inside flagged regions.
Vec2 particle_momentum(const BohmianParticle& particle, const VelocityField& vf,
                       double mass);

}  // namespace mbrx

#endif
