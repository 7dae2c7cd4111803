#include "mbrx/quantum.hpp"

#include <fftw3.h>

#include <cmath>
#include <string>

#include "mbrx/errors.hpp"
#include "mbrx/time_grid.hpp"

namespace mbrx {

namespace {
fftw_complex* as_fftw(cvector& a) {
    return reinterpret_cast<fftw_complex*>(a.data());
}
}  // namespace

SpectralOps::SpectralOps(const GridSpec& grid)
    : grid_(grid), plan_buffer_(grid.size()) {
    // Plans are made against an aligned scratch buffer and later executed on
    // equally aligned user arrays via the new-array interface.
    fwd_ = fftw_plan_dft_2d(grid_.ny, grid_.nx, as_fftw(plan_buffer_),
                            as_fftw(plan_buffer_), FFTW_FORWARD, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_2d(grid_.ny, grid_.nx, as_fftw(plan_buffer_),
                            as_fftw(plan_buffer_), FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!fwd_ || !inv_) throw NumericalError("FFT plan creation failed");
}

SpectralOps::~SpectralOps() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
}

void SpectralOps::forward(cvector& a) const {
    fftw_execute_dft(fwd_, as_fftw(a), as_fftw(a));
}

void SpectralOps::inverse(cvector& a) const {
    fftw_execute_dft(inv_, as_fftw(a), as_fftw(a));
}

void SpectralOps::inverse_normalized(cvector& a) const {
    inverse(a);
    const double scale = 1.0 / grid_.size();
    for (auto& v : a) v *= scale;
}

WaveField initial_packet(const GridSpec& grid, Vec2 center, double sigma_sq,
                         Vec2 momentum) {
    if (sigma_sq <= 0.0) throw ConfigError("sigma_sq must be positive");
    const double sigma = std::sqrt(sigma_sq);

    const double margin = 6.0 * sigma;
    if (center.x - margin < grid.extent.x_min ||
        center.x + margin > grid.extent.x_max ||
        center.y - margin < grid.extent.y_min ||
        center.y + margin > grid.extent.y_max) {
        throw PacketTooWide("packet 6-sigma ball (sigma = " +
                            std::to_string(sigma) +
                            ") does not fit inside the grid extents");
    }
    // The grid must resolve the packet's momentum content with headroom:
    // representable |k| tops out at pi/dx.
    const double sigma_p = grid.hbar / (2.0 * sigma);
    const auto check_axis = [&](double d, double p, const char* axis) {
        if (grid.hbar * M_PI / d < 4.0 * (std::abs(p) + 3.0 * sigma_p))
            throw ConfigError(std::string("grid spacing too coarse on ") + axis +
                              " for the requested momentum");
    };
    check_axis(grid.dx(), momentum.x, "x");
    check_axis(grid.dy(), momentum.y, "y");

    WaveField field;
    field.grid = grid;
    field.amp.resize(grid.size());
    const double amp0 = 1.0 / std::sqrt(2.0 * M_PI * sigma * sigma);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double dx = grid.x(i) - center.x;
            const double dy = grid.y(j) - center.y;
            const double envelope =
                amp0 * std::exp(-(dx * dx + dy * dy) / (4.0 * sigma_sq));
            const double phase = (momentum.x * dx + momentum.y * dy) / grid.hbar;
            field.amp[grid.index(i, j)] =
                envelope * std::complex<double>(std::cos(phase), std::sin(phase));
        }
    }
    const double n = field_norm(field);
    const double rescale = 1.0 / std::sqrt(n);
    for (auto& v : field.amp) v *= rescale;
    return field;
}

Box containing_box(const PesModel& model, Vec2 center, double sigma_sq,
                   Vec2 momentum, double mass, double hbar, Box base) {
    if (sigma_sq <= 0.0) throw ConfigError("sigma_sq must be positive");
    // Highest energy any appreciable part of the packet carries: mean
    // momentum plus a 3.5-sigma tail, launched from the center. An edge
    // whose potential exceeds this is classically unreachable, so a box
    // that clears it on all four sides cannot accumulate edge amplitude.
    // The 0.01 margin keeps the edge past the turning region rather than
    // exactly on it.
    const double sigma_p = hbar / (2.0 * std::sqrt(sigma_sq));
    const double p_hi = std::hypot(momentum.x, momentum.y) + 3.5 * sigma_p;
    const double e_edge =
        model.value(center) + p_hi * p_hi / (2.0 * mass) + 0.01;

    Box box = base;
    const double step = 0.25;
    for (int round = 0; round < 400; ++round) {
        constexpr int kSamples = 129;
        const auto clear = [&](Vec2 from, Vec2 to) {
            for (int k = 0; k < kSamples; ++k) {
                const double f = double(k) / (kSamples - 1);
                const Vec2 p{from.x + (to.x - from.x) * f,
                             from.y + (to.y - from.y) * f};
                if (model.value(p) < e_edge) return false;
            }
            return true;
        };
        bool grew = false;
        if (!clear({box.x_min, box.y_min}, {box.x_min, box.y_max})) {
            box.x_min -= step;
            grew = true;
        }
        if (!clear({box.x_max, box.y_min}, {box.x_max, box.y_max})) {
            box.x_max += step;
            grew = true;
        }
        if (!clear({box.x_min, box.y_min}, {box.x_max, box.y_min})) {
            box.y_min -= step;
            grew = true;
        }
        if (!clear({box.x_min, box.y_max}, {box.x_max, box.y_max})) {
            box.y_max += step;
            grew = true;
        }
        if (!grew) return box;
    }
    throw ConfigError("no confining wall within 100 length units of the box");
}

GridSpec regrid(const GridSpec& base, Box extent) {
    const auto cells = [](double length, double spacing) {
        const long n = std::lround(std::ceil(length / spacing / 32.0)) * 32;
        return static_cast<int>(n);
    };
    GridSpec g = base;
    g.extent = extent;
    g.nx = cells(extent.width(), base.dx());
    g.ny = cells(extent.height(), base.dy());
    return g;
}

double field_norm(const WaveField& field) {
    double sum = 0.0;
    for (const auto& v : field.amp) sum += std::norm(v);
    return sum * field.grid.cell_area();
}

double restricted_norm(const WaveField& field, const FrontierLine& line) {
    const GridSpec& g = field.grid;
    double sum = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        const double y = g.y(j);
        for (int i = 0; i < g.nx; ++i) {
            if (y > line.slope * g.x(i) + line.intercept)
                sum += std::norm(field.amp[g.index(i, j)]);
        }
    }
    return sum * g.cell_area();
}

double edge_norm(const WaveField& field, int band) {
    const GridSpec& g = field.grid;
    double sum = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        const bool j_edge = j < band || j >= g.ny - band;
        for (int i = 0; i < g.nx; ++i) {
            if (j_edge || i < band || i >= g.nx - band)
                sum += std::norm(field.amp[g.index(i, j)]);
        }
    }
    return sum * g.cell_area();
}

Vec2 position_expectation(const WaveField& field) {
    const GridSpec& g = field.grid;
    double sx = 0.0, sy = 0.0, sn = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double w = std::norm(field.amp[g.index(i, j)]);
            sx += w * g.x(i);
            sy += w * g.y(j);
            sn += w;
        }
    }
    return {sx / sn, sy / sn};
}

Vec2 position_variance(const WaveField& field) {
    const GridSpec& g = field.grid;
    const Vec2 mean = position_expectation(field);
    double vx = 0.0, vy = 0.0, sn = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double w = std::norm(field.amp[g.index(i, j)]);
            vx += w * (g.x(i) - mean.x) * (g.x(i) - mean.x);
            vy += w * (g.y(j) - mean.y) * (g.y(j) - mean.y);
            sn += w;
        }
    }
    return {vx / sn, vy / sn};
}

double potential_expectation(const WaveField& field, const PesModel& model) {
    const GridSpec& g = field.grid;
    double sum = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            sum += std::norm(field.amp[g.index(i, j)]) * model.value({g.x(i), g.y(j)});
    return sum * g.cell_area();
}

double kinetic_expectation(const WaveField& field, const SpectralOps& ops) {
    const GridSpec& g = field.grid;
    cvector work = field.amp;
    ops.forward(work);
    // Parseval: sum_x |psi|^2 dA = sum_k |psi_k|^2 dA / (nx ny).
    double sum = 0.0;
    const double coeff = g.hbar * g.hbar / (2.0 * g.mass);
    for (int j = 0; j < g.ny; ++j) {
        const double ky = g.ky(j);
        for (int i = 0; i < g.nx; ++i) {
            const double kx = g.kx(i);
            sum += coeff * (kx * kx + ky * ky) * std::norm(work[g.index(i, j)]);
        }
    }
    return sum * g.cell_area() / g.size();
}

SplitOperator::SplitOperator(const PesModel& model, const GridSpec& grid)
    : grid_(grid),
      half_potential_phase_(grid.size()),
      kinetic_phase_(grid.size()) {
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double v = model.value({grid.x(i), grid.y(j)});
            const double phi = -0.5 * v * grid.dt / grid.hbar;
            half_potential_phase_[grid.index(i, j)] = {std::cos(phi), std::sin(phi)};
        }
    }
    const double inv_n = 1.0 / grid.size();
    for (int j = 0; j < grid.ny; ++j) {
        const double ky = grid.ky(j);
        for (int i = 0; i < grid.nx; ++i) {
            const double kx = grid.kx(i);
            const double phi =
                -grid.hbar * (kx * kx + ky * ky) * grid.dt / (2.0 * grid.mass);
            kinetic_phase_[grid.index(i, j)] =
                std::complex<double>(std::cos(phi), std::sin(phi)) * inv_n;
        }
    }
}

void SplitOperator::step(WaveField& field, const SpectralOps& ops) const {
    if (!(field.grid == grid_))
        throw PreconditionError("field grid does not match the operator grid");
    cvector& a = field.amp;
    const long n = grid_.size();
    for (long idx = 0; idx < n; ++idx) a[idx] *= half_potential_phase_[idx];
    ops.forward(a);
    // The kinetic table carries the inverse-FFT 1/(nx*ny) factor.
    for (long idx = 0; idx < n; ++idx) a[idx] *= kinetic_phase_[idx];
    ops.inverse(a);
    for (long idx = 0; idx < n; ++idx) a[idx] *= half_potential_phase_[idx];
    field.t += grid_.dt;
}

WaveRunResult run_quantum_wave(const PesModel& model, WaveField field,
                               const SpectralOps& ops, const FrontierLine& line,
                               const WaveRunOptions& options) {
    const TimeGrid tg =
        make_time_grid(field.grid.dt, options.t_final, options.stride);
    const SplitOperator split(model, field.grid);

    WaveRunResult result;
    result.series.t.reserve(tg.n_samples);
    result.series.P.reserve(tg.n_samples);
    result.norm.reserve(tg.n_samples);

    const auto sample = [&](long k) {
        result.series.t.push_back(k * tg.sample_dt);
        result.series.P.push_back(restricted_norm(field, line));
        const double n = field_norm(field);
        result.norm.push_back(n);
        result.max_norm_drift =
            std::max(result.max_norm_drift, std::abs(n - 1.0));
        if (options.record_energy) {
            result.kinetic.push_back(kinetic_expectation(field, ops));
            result.potential.push_back(potential_expectation(field, model));
        }
        const double leak = edge_norm(field, options.leak_band) / n;
        result.max_leak_fraction = std::max(result.max_leak_fraction, leak);
        if (leak > options.leak_error_fraction)
            throw BoundaryLeak("edge band holds " + std::to_string(leak) +
                               " of the norm at t = " + std::to_string(field.t));
        if (leak > options.leak_warn_fraction) ++result.leak_warnings;
        for (long s : options.snapshot_samples)
            if (s == k) result.snapshots.push_back(field);
    };

    sample(0);
    for (long step = 1; step <= tg.n_steps; ++step) {
        split.step(field, ops);
        if (step % options.stride == 0) sample(step / options.stride);
    }
    return result;
}

}  // namespace mbrx
