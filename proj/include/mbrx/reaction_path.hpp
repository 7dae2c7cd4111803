#ifndef MBRX_REACTION_PATH_HPP
#define MBRX_REACTION_PATH_HPP

#include <vector>

#include "mbrx/pes.hpp"
#include "mbrx/vec.hpp"

namespace mbrx {

struct PathPoint {
    double s;  // arc length from the start of the path
    Vec2 position;
    double energy;
};

// Polyline representation of a minimum-energy path, parametrized by arc
// length (sum of segment lengths between recorded points).
struct ReactionPath {
    std::vector<PathPoint> points;

    double arc_length() const { return points.empty() ? 0.0 : points.back().s; }
    Vec2 position_at(double s) const;  // linear interpolation, clamped
};

struct DescentOptions {
    double max_step = 1e-2;
    double min_step = 1e-6;
    // Termination threshold on |grad V| / energy_scale; in practice descents
    // end earlier by entering the capture radius of a minimum.
    double gradient_tolerance = 1e-6;
    double capture_radius = 1e-3;
    // How far from a saddle, along the downhill eigenvector, a descent starts.
    double departure_offset = 1e-3;
    Box bounds{-2.5, 1.5, -1.0, 2.5};
};

// Steepest descent dx/ds = -grad V / |grad V| from `start`, integrated with
// RK4 at unit speed. Steps that raise the energy are retried at half length.
// When the path enters the capture radius of one of `minima`, that exact
// minimum is appended and the descent stops. Throws PathEscape if the path
// leaves the bounds and StepUnderflow if no energy-lowering step of at least
// min_step exists.
std::vector<PathPoint> trace_descent(const PesModel& model, Vec2 start,
                                     const std::vector<Vec2>& minima,
                                     const DescentOptions& options = {});

// The full path m3 -> ts2 -> m2 -> ts1 -> m1 with s = 0 at m3, assembled from
// the four saddle-to-minimum descents. Exact stationary points are inserted
// at the segment junctions. Throws TopologyMismatch if a descent does not
// arrive at the expected minimum.
ReactionPath build_full_path(const PesModel& model, const MbStationarySet& set,
                             const DescentOptions& options = {});

}  // namespace mbrx

#endif
