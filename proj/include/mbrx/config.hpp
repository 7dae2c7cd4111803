#ifndef MBRX_CONFIG_HPP
#define MBRX_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mbrx/vec.hpp"

namespace mbrx {

// Every knob a run can turn, with the defaults used throughout the tools.
// Launch centers are not configured here: packets and ensembles always start
// from the reactant minimum located on the surface at startup, with momentum
// (-p0, p0).
struct RunConfig {
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = "out";

    double p0 = 4.0;
    std::vector<double> p0_sweep;
    long count = 50000;
    long record_count = 0;

    double sigma_sq = 0.0125;
    double mass = 1836.0;
    double hbar = 1.0;

    double cl_dt = 0.1;
    double cl_t_final = 700.0;
    int cl_stride = 10;

    double q_dt = 0.05;
    double q_t_final = 700.0;
    int q_stride = 20;
    int nx = 512;
    int ny = 512;
    Box extent{-2.5, 1.5, -1.0, 2.5};

    double frontier_slope = 0.8024;
    double frontier_intercept = 1.2734;

    int node_substeps = 10;
    int node_max_refines = 3;
    double node_floor = 1e-12;

    int leak_band = 3;
    double leak_warn = 1e-6;
    double leak_error = 1e-3;

    bool operator==(const RunConfig&) const = default;
};

// Reads, validates, and returns a config. Missing keys keep their defaults;
// unknown keys, wrong types, and out-of-range values raise ConfigError with
// the offending field named.
RunConfig load_config(const std::string& path);

void save_config(const RunConfig& config, const std::string& path);

std::string config_json(const RunConfig& config);

void validate(const RunConfig& config);

// Stable 64-bit digest of everything that affects the numbers; worker count
// and output directory are excluded so reruns of the same physics hash alike.
std::uint64_t config_hash(const RunConfig& config);

}  // namespace mbrx

#endif
