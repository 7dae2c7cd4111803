#ifndef MBRX_IO_HPP
#define MBRX_IO_HPP

#include <string>
#include <vector>

#include "mbrx/analysis.hpp"
#include "mbrx/classical.hpp"
#include "mbrx/config.hpp"
#include "mbrx/grid.hpp"
#include "mbrx/pes.hpp"
#include "mbrx/reaction_path.hpp"
#include "mbrx/series.hpp"

namespace mbrx {

// Shortest decimal string that parses back to exactly the same double, so
// identical runs produce byte-identical files.
std::string format_double(double value);

// Columns t,x,y,px,py,E; a node_clamps column is appended when the
// trajectory carries clamp counts (quantum trajectories do).
void write_trajectory_csv(const std::string& path, const Trajectory& trajectory);

// Columns s,x,y,V.
void write_path_csv(const std::string& path, const ReactionPath& reaction_path);

// Columns t,P,W,Wbar; missing series (P for classical runs, W/Wbar for
// wave-only runs) are written as nan.
void write_series_csv(const std::string& path, const ProbabilitySeries& series);

// Columns kind,x,y,V,eig1,eig2 with Hessian eigenvalues in ascending order.
void write_stationary_csv(const std::string& path,
                          const std::vector<StationaryPoint>& points);

struct SweepRow {
    double p0;
    double Wbar_bohm;
    double Wbar_cl_rho0;
    double Wbar_cl_wigner;
};

// Columns p0,Wbar_bohm,Wbar_cl_rho0,Wbar_cl_wigner.
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

// Columns p0,E_mean,E_mean_minus_delta,E_point.
void write_energy_diagram_csv(const std::string& path,
                              const EnergyDiagram& diagram);

// base + ".bin": interleaved re,im float64 pairs, row-major with x fastest,
// little-endian. base + ".json": grid spec, sample time, and norm.
void write_field(const std::string& base, const WaveField& field, double norm);

// base + ".bin": float64 entries, row-major with arc length fastest.
// base + ".json": axis sizes and ranges.
void write_closeness(const std::string& base, const ClosenessMatrix& matrix);

// Run manifest: tool version, seed, config digest, and the configuration
// itself with worker count and output directory stripped, so reruns of the
// same physics produce byte-identical manifests.
void write_manifest(const std::string& path, const RunConfig& config);

}  // namespace mbrx

#endif
