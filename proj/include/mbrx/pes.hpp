#ifndef MBRX_PES_HPP
#define MBRX_PES_HPP

#include <array>
#include <vector>

#include "mbrx/vec.hpp"

namespace mbrx {

// One Gaussian term A * exp(a dx^2 + b dx dy + c dy^2), dx = x - x0, dy = y - y0.
struct GaussianTerm {
    double A;
    double a, b, c;
    double x0, y0;
};

// Sum-of-Gaussians surface. `energy_scale` multiplies the raw sum; the
// Muller-Brown parameters are conventionally tabulated so that the raw well
// depths are O(100), while the dynamics here run with wells of O(0.1), so the
// default model carries scale 1e-3.
class PesModel {
  public:
    PesModel(std::vector<GaussianTerm> terms, double energy_scale)
        : terms_(std::move(terms)), energy_scale_(energy_scale) {}

    static PesModel muller_brown();

    double value(Vec2 p) const;
    Vec2 gradient(Vec2 p) const;
    Mat2Sym hessian(Vec2 p) const;

    double energy_scale() const { return energy_scale_; }
    const std::vector<GaussianTerm>& terms() const { return terms_; }

  private:
    std::vector<GaussianTerm> terms_;
    double energy_scale_;
};

enum class StationaryKind { minimum, saddle, maximum };

struct StationaryPoint {
    Vec2 position;
    double energy;
    Mat2Sym hessian;
    std::array<double, 2> eigenvalues;  // ascending
    StationaryKind kind;
};

struct NewtonOptions {
    // Convergence threshold on the unscaled gradient |grad V| / energy_scale,
    // so the stopping point does not depend on the overall energy scaling.
    double gradient_tolerance = 1e-10;
    int max_iterations = 100;
    double dedup_radius = 1e-4;
    // Converged points outside this box are discarded (spurious far-field
    // stationary points of the Gaussian tails).
    Box keep_region{-2.5, 1.5, -1.0, 2.5};
};

struct StationarySearchReport {
    std::vector<StationaryPoint> points;
    std::vector<Vec2> failed_seeds;  // not converged within max_iterations
};

std::vector<Vec2> grid_seeds(const Box& box, int nx, int ny);

StationarySearchReport find_stationary_points(const PesModel& model,
                                              const std::vector<Vec2>& seeds,
                                              const NewtonOptions& options = {});

// The three minima and two saddles of the Muller-Brown surface, identified by
// geometry: m1 is the upper-left (deepest) minimum, m3 the lower-right
// (reactant-side) one, m2 the shallow one between them; ts1 connects m1-m2,
// ts2 connects m2-m3. Throws TopologyMismatch if the report does not contain
// exactly three minima and two saddles.
struct MbStationarySet {
    StationaryPoint m1, m2, m3;
    StationaryPoint ts1, ts2;
};

MbStationarySet locate_mb_points(const StationarySearchReport& report);

// Dividing line y = slope * x + intercept between the product region (strictly
// above) and the reactant region. m1 lies above, m3 below.
struct FrontierLine {
    double slope = 0.8024;
    double intercept = 1.2734;

    bool in_products(Vec2 p) const { return p.y > slope * p.x + intercept; }
};

}  // namespace mbrx

#endif
