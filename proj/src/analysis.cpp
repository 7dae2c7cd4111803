#include "mbrx/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mbrx/errors.hpp"

namespace mbrx {

namespace {

Vec2 interpolate_position(const Trajectory& traj, double t) {
    if (t <= traj.t.front()) return traj.position.front();
    if (t >= traj.t.back()) return traj.position.back();
    const auto it = std::lower_bound(traj.t.begin(), traj.t.end(), t);
    const std::size_t hi = it - traj.t.begin();
    const std::size_t lo = hi - 1;
    const double span = traj.t[hi] - traj.t[lo];
    const double w = span > 0.0 ? (t - traj.t[lo]) / span : 0.0;
    return traj.position[lo] * (1.0 - w) + traj.position[hi] * w;
}

}  // namespace

ClosenessMatrix caratheodory(const Trajectory& trajectory,
                             const ReactionPath& path, long n_time,
                             long n_arc) {
    if (trajectory.t.size() < 2 || path.points.size() < 2)
        throw PreconditionError("need at least two samples on both inputs");
    if (n_time < 2 || n_arc < 2)
        throw PreconditionError("resampling needs at least two points per axis");

    ClosenessMatrix m;
    m.n_time = n_time;
    m.n_arc = n_arc;
    m.t.resize(n_time);
    m.s.resize(n_arc);
    m.c.resize(n_time * n_arc);

    const double t0 = trajectory.t.front();
    const double t1 = trajectory.t.back();
    for (long i = 0; i < n_time; ++i)
        m.t[i] = t0 + (t1 - t0) * i / (n_time - 1);
    const double s_total = path.arc_length();
    for (long j = 0; j < n_arc; ++j)
        m.s[j] = s_total * j / (n_arc - 1);

    std::vector<Vec2> path_points(n_arc);
    for (long j = 0; j < n_arc; ++j) path_points[j] = path.position_at(m.s[j]);

    for (long i = 0; i < n_time; ++i) {
        const Vec2 x = interpolate_position(trajectory, m.t[i]);
        for (long j = 0; j < n_arc; ++j)
            m.c[i * n_arc + j] = norm_sq(x - path_points[j]);
    }
    return m;
}

PairedDifference paired_difference(const std::vector<Trajectory>& a,
                                   const std::vector<Trajectory>& b) {
    if (a.size() != b.size() || a.empty())
        throw PreconditionError("paired comparison needs equal nonempty sets");
    const std::size_t n_samples = a.front().t.size();
    for (const auto* set : {&a, &b})
        for (const Trajectory& traj : *set)
            if (traj.t.size() != n_samples)
                throw TimeAxisMismatch("trajectories have differing sample counts");
    for (std::size_t k = 0; k < n_samples; ++k)
        for (std::size_t i = 0; i < a.size(); ++i)
            if (std::abs(a[i].t[k] - b[i].t[k]) > 1e-9)
                throw TimeAxisMismatch("sample times differ at index " +
                                       std::to_string(k));
    for (std::size_t i = 0; i < a.size(); ++i)
        if (distance(a[i].position.front(), b[i].position.front()) > 1e-9)
            throw InitialConditionMismatch("pair " + std::to_string(i) +
                                           " starts from different points");

    PairedDifference d;
    d.t = a.front().t;
    d.mean_dx.resize(n_samples);
    d.max_dx.resize(n_samples);
    d.mean_dp.resize(n_samples);
    d.max_dp.resize(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
        double sum_dx = 0.0, max_dx = 0.0, sum_dp = 0.0, max_dp = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double dx = distance(a[i].position[k], b[i].position[k]);
            const double dp = distance(a[i].momentum[k], b[i].momentum[k]);
            sum_dx += dx;
            max_dx = std::max(max_dx, dx);
            sum_dp += dp;
            max_dp = std::max(max_dp, dp);
        }
        d.mean_dx[k] = sum_dx / a.size();
        d.max_dx[k] = max_dx;
        d.mean_dp[k] = sum_dp / a.size();
        d.max_dp[k] = max_dp;
    }
    return d;
}

double asymptotic_products(const ProbabilitySeries& series, double min_time) {
    if (series.t.empty() || series.Wbar.empty())
        throw SeriesTooShort("series has no Wbar samples");
    if (series.t.back() < min_time - 1e-9)
        throw SeriesTooShort("series ends at t = " +
                             std::to_string(series.t.back()) +
                             ", needs t >= " + std::to_string(min_time));
    return series.Wbar.back();
}

EquivarianceReport evaluate_equivariance(const WaveField& field,
                                         const std::vector<Vec2>& positions,
                                         int bins_x, int bins_y,
                                         double min_expected, double z,
                                         double pass_fraction) {
    const GridSpec& g = field.grid;
    if (bins_x <= 0 || bins_y <= 0 || g.nx % bins_x != 0 || g.ny % bins_y != 0)
        throw ConfigError("histogram bins must evenly divide the grid");
    const int cx = g.nx / bins_x;
    const int cy = g.ny / bins_y;
    const long n = static_cast<long>(positions.size());

    std::vector<double> expected(static_cast<long>(bins_x) * bins_y, 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            expected[(j / cy) * bins_x + i / cx] +=
                std::norm(field.amp[g.index(i, j)]);
    const double cell_to_count = g.cell_area() * n;
    for (auto& e : expected) e *= cell_to_count;

    std::vector<long> observed(expected.size(), 0);
    const double bw_x = g.extent.width() / bins_x;
    const double bw_y = g.extent.height() / bins_y;
    for (const Vec2& p : positions) {
        if (!g.extent.contains(p)) continue;  // vanishing tail, skip
        const int bi = std::min(bins_x - 1,
                                static_cast<int>((p.x - g.extent.x_min) / bw_x));
        const int bj = std::min(bins_y - 1,
                                static_cast<int>((p.y - g.extent.y_min) / bw_y));
        ++observed[static_cast<long>(bj) * bins_x + bi];
    }

    EquivarianceReport report;
    for (std::size_t b = 0; b < expected.size(); ++b) {
        if (expected[b] < min_expected) continue;
        ++report.bins_checked;
        const double dev =
            std::abs(observed[b] - expected[b]) / std::sqrt(expected[b]);
        report.worst_z = std::max(report.worst_z, dev);
        if (dev > z) ++report.bins_failed;
    }
    report.pass =
        report.bins_checked > 0 &&
        (double(report.bins_checked - report.bins_failed) >=
         pass_fraction * double(report.bins_checked));
    return report;
}

}  // namespace mbrx
