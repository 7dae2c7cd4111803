#ifndef MBRX_VEC_HPP
#define MBRX_VEC_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <new>

namespace mbrx {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return s * a; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm_sq(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm_sq(a)); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

// Symmetric 2x2 matrix, stored as the upper triangle.
struct Mat2Sym {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    double det() const { return xx * yy - xy * xy; }
    double trace() const { return xx + yy; }

    Vec2 operator*(Vec2 v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }

    // Eigenvalues in ascending order.
    std::array<double, 2> eigenvalues() const {
        const double mean = 0.5 * trace();
        const double d = std::sqrt(0.25 * (xx - yy) * (xx - yy) + xy * xy);
        return {mean - d, mean + d};
    }

    // Unit eigenvector belonging to the given eigenvalue.
    Vec2 eigenvector(double lambda) const {
        // (A - lambda I) v = 0; pick the row with the larger residual.
        Vec2 v{xy, lambda - xx};
        if (norm_sq(v) < 1e-30) v = {lambda - yy, xy};
        if (norm_sq(v) < 1e-30) v = {1.0, 0.0};  // already diagonal
        return (1.0 / norm(v)) * v;
    }

    // Solve A v = b (A assumed nonsingular).
    Vec2 solve(Vec2 b) const {
        const double inv_det = 1.0 / det();
        return {inv_det * (yy * b.x - xy * b.y), inv_det * (xx * b.y - xy * b.x)};
    }
};

struct Box {
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;

    bool operator==(const Box&) const = default;

    bool contains(Vec2 p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
};

// Allocator with 64-byte alignment so FFTW can use SIMD paths on the data.
template <typename T>
struct AlignedAllocator {
    using value_type = T;
    static constexpr std::size_t alignment = 64;

    AlignedAllocator() = default;
    template <typename U>
    AlignedAllocator(const AlignedAllocator<U>&) {}

    T* allocate(std::size_t n) {
        return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t(alignment)));
    }
    void deallocate(T* p, std::size_t) noexcept {
        ::operator delete(p, std::align_val_t(alignment));
    }
    bool operator==(const AlignedAllocator&) const { return true; }
};

}  // namespace mbrx

#endif
