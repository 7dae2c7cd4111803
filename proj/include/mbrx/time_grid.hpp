#ifndef MBRX_TIME_GRID_HPP
#define MBRX_TIME_GRID_HPP

#include <cmath>

#include "mbrx/errors.hpp"

namespace mbrx {

// Uniform step/sample bookkeeping shared by the integrators. Recording
// happens every `stride` steps and t_final must land exactly on a sample.
struct TimeGrid {
    long n_steps;
    long n_samples;    // n_steps / stride + 1, including t = 0
    double sample_dt;  // stride * dt
};

inline TimeGrid make_time_grid(double dt, double t_final, int stride) {
    if (dt <= 0.0 || t_final <= 0.0 || stride <= 0)
        throw ConfigError("dt, t_final and stride must be positive");
    const long n_steps = std::llround(t_final / dt);
    if (std::abs(n_steps * dt - t_final) > 1e-9)
        throw ConfigError("t_final must be a whole number of steps");
    if (n_steps % stride != 0)
        throw ConfigError("t_final must be a whole number of recorded samples");
    return {n_steps, n_steps / stride + 1, stride * dt};
}

}  // namespace mbrx

#endif
