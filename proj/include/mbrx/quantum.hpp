#ifndef MBRX_QUANTUM_HPP
#define MBRX_QUANTUM_HPP

#include <vector>

#include "mbrx/grid.hpp"
#include "mbrx/pes.hpp"
#include "mbrx/series.hpp"

// Forward declarations so fftw3.h stays out of the public headers.
struct fftw_plan_s;

namespace mbrx {

// In-place 2D FFTs on the grid. Plans are created once with FFTW_ESTIMATE
// (the measuring planner picks machine-dependent algorithms, which would make
// runs irreproducible) and executed single-threaded on 64-byte aligned
// buffers. execute() on distinct arrays is thread-safe, plan creation is not.
class SpectralOps {
  public:
    explicit SpectralOps(const GridSpec& grid);
    ~SpectralOps();
    SpectralOps(const SpectralOps&) = delete;
    SpectralOps& operator=(const SpectralOps&) = delete;

    const GridSpec& grid() const { return grid_; }

    void forward(cvector& a) const;  // unnormalized
    void inverse(cvector& a) const;  // unnormalized; forward+inverse = nx*ny
    void inverse_normalized(cvector& a) const;

  private:
    GridSpec grid_;
    fftw_plan_s* fwd_;
    fftw_plan_s* inv_;
    cvector plan_buffer_;
};

// Normalized Gaussian packet exp(-(r - r0)^2/(4 sigma^2) + i p.(r - r0)/hbar)
// on the grid, renormalized so the discrete norm is exactly 1. Throws
// PacketTooWide if the 6-sigma ball does not fit inside the extents and
// ConfigError if the grid cannot represent the packet's momentum content
// (hbar pi / dx < 4 (|p| + 3 sigma_p) on either axis, sigma_p = hbar/2 sigma).
WaveField initial_packet(const GridSpec& grid, Vec2 center, double sigma_sq,
                         Vec2 momentum);

// Grows `base` outward, a quarter length unit at a time, until the potential
// along every edge exceeds the highest energy the packet can reach (mean
// momentum plus a 3.5-sigma tail). The surface rises in all directions, so
// fast packets turn around instead of escaping; the returned box encloses
// that turning region and keeps the edge-leak monitor quiet at any t_final.
// Never shrinks below `base`. Throws ConfigError if 100 length units of
// growth do not find a confining wall.
Box containing_box(const PesModel& model, Vec2 center, double sigma_sq,
                   Vec2 momentum, double mass, double hbar, Box base);

// The same cell size on a different extent; cell counts are rounded up to
// multiples of 32 so the transforms keep fast factorizations.
GridSpec regrid(const GridSpec& base, Box extent);

double field_norm(const WaveField& field);
// Norm restricted to cells strictly above the frontier line.
double restricted_norm(const WaveField& field, const FrontierLine& line);
// Norm within `band` cells of any grid edge; the leak monitor watches this.
double edge_norm(const WaveField& field, int band);

Vec2 position_expectation(const WaveField& field);
Vec2 position_variance(const WaveField& field);  // per-axis
double potential_expectation(const WaveField& field, const PesModel& model);
// <T> evaluated spectrally through Parseval's identity.
double kinetic_expectation(const WaveField& field, const SpectralOps& ops);

// Symmetric second-order split step: half potential phase, full kinetic
// phase in k-space, half potential phase. Phase tables are precomputed.
class SplitOperator {
  public:
    SplitOperator(const PesModel& model, const GridSpec& grid);

    // Advances field.t by grid.dt.
    void step(WaveField& field, const SpectralOps& ops) const;

  private:
    GridSpec grid_;
    cvector half_potential_phase_;
    cvector kinetic_phase_;  // includes the 1/(nx*ny) inverse-FFT scale
};

struct WaveRunOptions {
    double t_final = 700.0;
    int stride = 20;  // sample every stride-th step
    int leak_band = 3;
    double leak_warn_fraction = 1e-6;
    double leak_error_fraction = 1e-3;
    bool record_energy = false;  // kinetic and potential expectations
    std::vector<long> snapshot_samples;  // sample indices to keep fields for
};

struct WaveRunResult {
    ProbabilitySeries series;    // t and P
    std::vector<double> norm;      // per sample
    std::vector<double> kinetic;   // per sample when record_energy
    std::vector<double> potential; // per sample when record_energy
    double max_norm_drift = 0.0;
    double max_leak_fraction = 0.0;
    int leak_warnings = 0;
    std::vector<WaveField> snapshots;
};

// Wave-only propagation with product-region probability, norm and edge-leak
// monitoring at the sample cadence. Throws BoundaryLeak once the edge band
// holds more than leak_error_fraction of the norm.
WaveRunResult run_quantum_wave(const PesModel& model, WaveField field,
                               const SpectralOps& ops, const FrontierLine& line,
                               const WaveRunOptions& options);

}  // namespace mbrx

#endif
