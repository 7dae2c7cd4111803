#include "mbrx/reaction_path.hpp"

#include <algorithm>
#include <cmath>

#include "mbrx/errors.hpp"

namespace mbrx {

Vec2 ReactionPath::position_at(double s) const {
    if (points.empty()) return {};
    if (s <= points.front().s) return points.front().position;
    if (s >= points.back().s) return points.back().position;
    const auto it = std::lower_bound(
        points.begin(), points.end(), s,
        [](const PathPoint& p, double value) { return p.s < value; });
    const PathPoint& hi = *it;
    const PathPoint& lo = *(it - 1);
    const double span = hi.s - lo.s;
    if (span <= 0.0) return lo.position;
    const double w = (s - lo.s) / span;
    return lo.position * (1.0 - w) + hi.position * w;
}

namespace {

// Unit downhill direction; returns false once the gradient underflows.
bool downhill(const PesModel& model, Vec2 p, Vec2& dir) {
    const Vec2 g = model.gradient(p);
    const double n = norm(g);
    if (n < 1e-300) return false;
    dir = g * (-1.0 / n);
    return true;
}

bool rk4_step(const PesModel& model, Vec2 p, double h, Vec2& out) {
    Vec2 k1, k2, k3, k4;
    if (!downhill(model, p, k1)) return false;
    if (!downhill(model, p + k1 * (0.5 * h), k2)) return false;
    if (!downhill(model, p + k2 * (0.5 * h), k3)) return false;
    if (!downhill(model, p + k3 * h, k4)) return false;
    out = p + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
    return true;
}

}  // namespace

std::vector<PathPoint> trace_descent(const PesModel& model, Vec2 start,
                                     const std::vector<Vec2>& minima,
                                     const DescentOptions& options) {
    std::vector<PathPoint> path;
    Vec2 p = start;
    double s = 0.0;
    path.push_back({s, p, model.value(p)});

    const double grad_tol = options.gradient_tolerance * model.energy_scale();
    double h = options.max_step;
    const long max_total_steps = 2'000'000;
    for (long step = 0; step < max_total_steps; ++step) {
        double nearest = 1e300;
        for (const Vec2& m : minima) nearest = std::min(nearest, distance(p, m));
        if (nearest < options.capture_radius) {
            for (const Vec2& m : minima) {
                if (distance(p, m) == nearest) {
                    s += nearest;
                    path.push_back({s, m, model.value(m)});
                    return path;
                }
            }
        }
        if (norm(model.gradient(p)) < grad_tol) return path;
        if (!options.bounds.contains(p))
            throw PathEscape("descent left the bounding box at (" +
                             std::to_string(p.x) + ", " + std::to_string(p.y) + ")");

        // A full-length step would hop over the capture ball during the final
        // approach, so resolve it with steps no longer than half the distance
        // to the nearest minimum.
        const double h_cap =
            std::max(0.5 * nearest, 2.0 * options.min_step);
        const double v_here = model.value(p);
        Vec2 p_next;
        double h_try = std::min(h, h_cap);
        while (true) {
            if (!rk4_step(model, p, h_try, p_next)) return path;  // gradient vanished
            // Demand both a lower energy and real displacement; RK4 stages can
            // cancel to a standstill when the step brackets a valley floor.
            if (model.value(p_next) < v_here &&
                distance(p, p_next) > 0.05 * h_try)
                break;
            h_try *= 0.5;
            if (h_try < options.min_step)
                throw StepUnderflow("no energy-lowering step above min_step near (" +
                                    std::to_string(p.x) + ", " +
                                    std::to_string(p.y) + ")");
        }
        s += distance(p, p_next);
        p = p_next;
        path.push_back({s, p, model.value(p)});
        h = std::min(2.0 * h_try, options.max_step);
    }
    throw NumericalError("descent did not terminate");
}

namespace {

// Descent from `saddle`, launched along the downhill eigenvector oriented
// toward `target`. The exact saddle is prepended and the arrival is checked.
std::vector<PathPoint> saddle_to_minimum(const PesModel& model,
                                         const StationaryPoint& saddle,
                                         const StationaryPoint& target,
                                         const std::vector<Vec2>& minima,
                                         const DescentOptions& options) {
    Vec2 v = saddle.hessian.eigenvector(saddle.eigenvalues[0]);
    if (dot(v, target.position - saddle.position) < 0.0) v = -v;
    auto seg = trace_descent(model, saddle.position + v * options.departure_offset,
                             minima, options);
    if (distance(seg.back().position, target.position) > options.capture_radius)
        throw TopologyMismatch("descent from the saddle did not reach the expected minimum");
    seg.insert(seg.begin(), {0.0, saddle.position, saddle.energy});
    return seg;
}

void append_segment(std::vector<PathPoint>& path,
                    const std::vector<PathPoint>& seg, bool reversed) {
    const std::size_t n = seg.size();
    for (std::size_t k = 0; k < n; ++k) {
        const PathPoint& pt = seg[reversed ? n - 1 - k : k];
        if (!path.empty() && distance(path.back().position, pt.position) < 1e-12)
            continue;
        double s = 0.0;
        if (!path.empty())
            s = path.back().s + distance(path.back().position, pt.position);
        path.push_back({s, pt.position, pt.energy});
    }
}

}  // namespace

ReactionPath build_full_path(const PesModel& model, const MbStationarySet& set,
                             const DescentOptions& options) {
    const std::vector<Vec2> minima = {set.m1.position, set.m2.position,
                                      set.m3.position};
    const auto ts2_m3 = saddle_to_minimum(model, set.ts2, set.m3, minima, options);
    const auto ts2_m2 = saddle_to_minimum(model, set.ts2, set.m2, minima, options);
    const auto ts1_m2 = saddle_to_minimum(model, set.ts1, set.m2, minima, options);
    const auto ts1_m1 = saddle_to_minimum(model, set.ts1, set.m1, minima, options);

    ReactionPath path;
    append_segment(path.points, ts2_m3, true);   // m3 ... ts2
    append_segment(path.points, ts2_m2, false);  // ts2 ... m2
    append_segment(path.points, ts1_m2, true);   // m2 ... ts1
    append_segment(path.points, ts1_m1, false);  // ts1 ... m1
    return path;
}

}  // namespace mbrx
