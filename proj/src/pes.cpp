#include "mbrx/pes.hpp"

#include <algorithm>
#include <cmath>

#include "mbrx/errors.hpp"

namespace mbrx {

PesModel PesModel::muller_brown() {
    // Standard parameter set; raw well depths are about -147/-81/-108 and the
    // 1e-3 scale brings them to the -0.147/-0.081/-0.108 used throughout.
    std::vector<GaussianTerm> terms = {
        {-200.0, -1.0, 0.0, -10.0, 1.0, 0.0},
        {-100.0, -1.0, 0.0, -10.0, 0.0, 0.5},
        {-170.0, -6.5, 11.0, -6.5, -0.5, 1.5},
        {15.0, 0.7, 0.6, 0.7, -1.0, 1.0},
    };
    return PesModel(std::move(terms), 1e-3);
}

double PesModel::value(Vec2 p) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
        const double dx = p.x - t.x0;
        const double dy = p.y - t.y0;
        sum += t.A * std::exp(t.a * dx * dx + t.b * dx * dy + t.c * dy * dy);
    }
    return energy_scale_ * sum;
}

Vec2 PesModel::gradient(Vec2 p) const {
    double gx = 0.0, gy = 0.0;
    for (const auto& t : terms_) {
        const double dx = p.x - t.x0;
        const double dy = p.y - t.y0;
        const double e =
            t.A * std::exp(t.a * dx * dx + t.b * dx * dy + t.c * dy * dy);
        gx += e * (2.0 * t.a * dx + t.b * dy);
        gy += e * (t.b * dx + 2.0 * t.c * dy);
    }
    return {energy_scale_ * gx, energy_scale_ * gy};
}

Mat2Sym PesModel::hessian(Vec2 p) const {
    double hxx = 0.0, hxy = 0.0, hyy = 0.0;
    for (const auto& t : terms_) {
        const double dx = p.x - t.x0;
        const double dy = p.y - t.y0;
        const double e =
            t.A * std::exp(t.a * dx * dx + t.b * dx * dy + t.c * dy * dy);
        const double u = 2.0 * t.a * dx + t.b * dy;  // d(exponent)/dx
        const double v = t.b * dx + 2.0 * t.c * dy;  // d(exponent)/dy
        hxx += e * (u * u + 2.0 * t.a);
        hxy += e * (u * v + t.b);
        hyy += e * (v * v + 2.0 * t.c);
    }
    return {energy_scale_ * hxx, energy_scale_ * hxy, energy_scale_ * hyy};
}

std::vector<Vec2> grid_seeds(const Box& box, int nx, int ny) {
    std::vector<Vec2> seeds;
    seeds.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            seeds.push_back({box.x_min + box.width() * (i + 0.5) / nx,
                             box.y_min + box.height() * (j + 0.5) / ny});
        }
    }
    return seeds;
}

StationarySearchReport find_stationary_points(const PesModel& model,
                                              const std::vector<Vec2>& seeds,
                                              const NewtonOptions& options) {
    StationarySearchReport report;
    const double tol = options.gradient_tolerance * model.energy_scale();
    for (const Vec2& seed : seeds) {
        Vec2 p = seed;
        bool converged = false;
        for (int it = 0; it < options.max_iterations; ++it) {
            const Vec2 g = model.gradient(p);
            if (norm(g) <= tol) {
                converged = true;
                break;
            }
            const Mat2Sym h = model.hessian(p);
            if (std::abs(h.det()) < 1e-300) break;  // singular, give up
            p = p - h.solve(g);
            if (std::abs(p.x) > 1e3 || std::abs(p.y) > 1e3) break;  // diverged
        }
        if (!converged) {
            report.failed_seeds.push_back(seed);
            continue;
        }
        if (!options.keep_region.contains(p)) continue;
        const auto dup = std::find_if(
            report.points.begin(), report.points.end(), [&](const auto& sp) {
                return distance(sp.position, p) < options.dedup_radius;
            });
        if (dup != report.points.end()) continue;

        StationaryPoint sp;
        sp.position = p;
        sp.energy = model.value(p);
        sp.hessian = model.hessian(p);
        sp.eigenvalues = sp.hessian.eigenvalues();
        if (sp.eigenvalues[0] > 0.0) {
            sp.kind = StationaryKind::minimum;
        } else if (sp.eigenvalues[1] < 0.0) {
            sp.kind = StationaryKind::maximum;
        } else {
            sp.kind = StationaryKind::saddle;
        }
        report.points.push_back(sp);
    }
    return report;
}

MbStationarySet locate_mb_points(const StationarySearchReport& report) {
    std::vector<StationaryPoint> minima, saddles;
    for (const auto& sp : report.points) {
        if (sp.kind == StationaryKind::minimum) minima.push_back(sp);
        if (sp.kind == StationaryKind::saddle) saddles.push_back(sp);
    }
    if (minima.size() != 3 || saddles.size() != 2) {
        throw TopologyMismatch("expected 3 minima and 2 saddles, found " +
                               std::to_string(minima.size()) + " and " +
                               std::to_string(saddles.size()));
    }
    MbStationarySet set;
    // m1: highest y (product well), m3: highest x (reactant well).
    std::sort(minima.begin(), minima.end(), [](const auto& a, const auto& b) {
        return a.position.y < b.position.y;
    });
    set.m1 = minima[2];
    set.m3 = minima[0].position.x > minima[1].position.x ? minima[0] : minima[1];
    set.m2 = minima[0].position.x > minima[1].position.x ? minima[1] : minima[0];
    // ts1 sits between m1 and m2 (smaller x), ts2 between m2 and m3.
    if (saddles[0].position.x > saddles[1].position.x)
        std::swap(saddles[0], saddles[1]);
    set.ts1 = saddles[0];
    set.ts2 = saddles[1];
    return set;
}

}  // namespace mbrx
