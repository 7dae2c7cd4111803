#ifndef MBRX_GRID_HPP
#define MBRX_GRID_HPP

#include <complex>
#include <vector>

#include "mbrx/vec.hpp"

namespace mbrx {

using cvector =
    std::vector<std::complex<double>, AlignedAllocator<std::complex<double>>>;

// Uniform periodic grid with cell-centered coordinates, row-major storage
// with y as the slow index: index(i, j) = j * nx + i.
struct GridSpec {
    Box extent{-2.5, 1.5, -1.0, 2.5};
    int nx = 512;
    int ny = 512;
    double dt = 0.05;
    double mass = 1836.0;
    double hbar = 1.0;

    double dx() const { return extent.width() / nx; }
    double dy() const { return extent.height() / ny; }
    double cell_area() const { return dx() * dy(); }
    double x(int i) const { return extent.x_min + (i + 0.5) * dx(); }
    double y(int j) const { return extent.y_min + (j + 0.5) * dy(); }
    long index(int i, int j) const { return static_cast<long>(j) * nx + i; }
    long size() const { return static_cast<long>(nx) * ny; }

    // Spectral wavenumbers in standard FFT layout: frequency i for
    // i <= n/2, negative beyond.
    double kx(int i) const {
        const int f = i <= nx / 2 ? i : i - nx;
        return 2.0 * M_PI * f / extent.width();
    }
    double ky(int j) const {
        const int f = j <= ny / 2 ? j : j - ny;
        return 2.0 * M_PI * f / extent.height();
    }

    bool operator==(const GridSpec&) const = default;
};

struct WaveField {
    GridSpec grid;
    cvector amp;
    double t = 0.0;
};

}  // namespace mbrx

#endif
