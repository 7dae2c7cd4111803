#ifndef MBRX_ANALYSIS_HPP
#define MBRX_ANALYSIS_HPP

#include <vector>

#include "mbrx/classical.hpp"
#include "mbrx/grid.hpp"
#include "mbrx/reaction_path.hpp"
#include "mbrx/series.hpp"
#include "mbrx/vec.hpp"

namespace mbrx {

// Squared distance between the trajectory at time t_i and the reaction path
// at arc length s_j, on uniform resamplings of both: c[i * n_arc + j].
// A trajectory that tracks the path shows up as a low-valued monotone ridge.
struct ClosenessMatrix {
    long n_time = 0;
    long n_arc = 0;
    std::vector<double> c;
    std::vector<double> t;  // resampled times
    std::vector<double> s;  // resampled arc lengths

    double at(long i, long j) const { return c[i * n_arc + j]; }
};

ClosenessMatrix caratheodory(const Trajectory& trajectory,
                             const ReactionPath& path, long n_time = 512,
                             long n_arc = 512);

// Per-sample statistics over pairs (a[i], b[i]) of position and momentum
// separations. Pairs must share initial positions to 1e-9 and the exact
// sample grid; everything else is a hard error, not a tolerance.
struct PairedDifference {
    std::vector<double> t;
    std::vector<double> mean_dx;
    std::vector<double> max_dx;
    std::vector<double> mean_dp;
    std::vector<double> max_dp;
};

PairedDifference paired_difference(const std::vector<Trajectory>& a,
                                   const std::vector<Trajectory>& b);

// Final-time Wbar; the series must reach min_time, otherwise SeriesTooShort.
double asymptotic_products(const ProbabilitySeries& series,
                           double min_time = 700.0);

// Chi-squared-style comparison of a particle cloud against |psi|^2 on a
// coarsened histogram: every bin with at least min_expected expected counts
// must satisfy |observed - expected| <= z sqrt(expected), and the run passes
// when at least pass_fraction of the checked bins do.
struct EquivarianceReport {
    long bins_checked = 0;
    long bins_failed = 0;
    double worst_z = 0.0;
    bool pass = false;
};

EquivarianceReport evaluate_equivariance(const WaveField& field,
                                         const std::vector<Vec2>& positions,
                                         int bins_x = 64, int bins_y = 64,
                                         double min_expected = 10.0,
                                         double z = 4.0,
                                         double pass_fraction = 0.99);

}  // namespace mbrx

#endif
