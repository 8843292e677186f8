#pragma once

#include <cmath>
#include <cstddef>

#include "beltrami/fields.hpp"

namespace beltrami {

namespace detail {

inline void require_finite(const ScalarField& f, const char* what) {
    if (!f.finite()) throw NonFiniteInput(std::string(what) + ": non-finite input values");
}
inline void require_finite(const VectorField& f, const char* what) {
    if (!f.finite()) throw NonFiniteInput(std::string(what) + ": non-finite input values");
}

// Second-order coordinate derivative along axis a: centered in the interior,
// one-sided three-point stencils at the boundary. Exact for quadratics.
// Unused axes return zero.
inline ScalarField coordinate_derivative(const ScalarField& f, int a) {
    const Grid& g = f.grid;
    ScalarField d(g);
    if (!g.axis_used(a)) return d;
    const double h = g.spacing[a];
    const std::size_t n = g.dims[a];
    std::array<std::size_t, 3> stride_arr{1, g.dims[0], g.dims[0] * g.dims[1]};
    const std::size_t s = stride_arr[a];

    const std::size_t nlines = g.size() / n;
    parallel_for(nlines, [&](std::size_t line) {
        // Decompose line index into the two fixed axes.
        std::size_t idx[3];
        std::size_t rem = line;
        for (int b = 0; b < 3; ++b) {
            if (b == a) { idx[b] = 0; continue; }
            idx[b] = rem % g.dims[b];
            rem /= g.dims[b];
        }
        std::size_t base = g.index(idx[0], idx[1], idx[2]);
        const double* v = f.values.data() + base;
        double* out = d.values.data() + base;
        out[0] = (-3.0 * v[0] + 4.0 * v[s] - v[2 * s]) / (2.0 * h);
        for (std::size_t m = 1; m + 1 < n; ++m)
            out[m * s] = (v[(m + 1) * s] - v[(m - 1) * s]) / (2.0 * h);
        out[(n - 1) * s] =
            (3.0 * v[(n - 1) * s] - 4.0 * v[(n - 2) * s] + v[(n - 3) * s]) / (2.0 * h);
    });
    return d;
}

}  // namespace detail

// grad f in the grid's orthonormal physical frame. Cylindrical grids use
// (df/dr, (1/r) df/dtheta, df/dz).
inline VectorField gradient(const ScalarField& f) {
    detail::require_finite(f, "gradient");
    const Grid& g = f.grid;
    ScalarField d0 = detail::coordinate_derivative(f, 0);
    ScalarField d1 = detail::coordinate_derivative(f, 1);
    ScalarField d2 = detail::coordinate_derivative(f, 2);
    VectorField out(g);
    const bool cyl = g.coords == CoordinateSystem::CylindricalRZ;
    for (std::size_t k = 0; k < g.dims[2]; ++k)
        for (std::size_t j = 0; j < g.dims[1]; ++j)
            for (std::size_t i = 0; i < g.dims[0]; ++i) {
                std::size_t n = g.index(i, j, k);
                double inv_r = cyl ? 1.0 / g.node(i, j, k).x : 1.0;
                out[n] = {d0[n], cyl ? d1[n] * inv_r : d1[n], d2[n]};
            }
    return out;
}

inline ScalarField divergence(const VectorField& u) {
    detail::require_finite(u, "divergence");
    const Grid& g = u.grid;
    ScalarField out(g);
    if (g.coords == CoordinateSystem::Cartesian) {
        ScalarField dx = detail::coordinate_derivative(u.component(0), 0);
        ScalarField dy = detail::coordinate_derivative(u.component(1), 1);
        ScalarField dz = detail::coordinate_derivative(u.component(2), 2);
        for (std::size_t n = 0; n < g.size(); ++n) out[n] = dx[n] + dy[n] + dz[n];
        return out;
    }
    // (1/r) d(r u_r)/dr + (1/r) du_theta/dtheta + du_z/dz
    ScalarField rur(g), ut = u.component(1), uz = u.component(2);
    for (std::size_t k = 0; k < g.dims[2]; ++k)
        for (std::size_t j = 0; j < g.dims[1]; ++j)
            for (std::size_t i = 0; i < g.dims[0]; ++i)
                rur.at(i, j, k) = g.node(i, j, k).x * u.at(i, j, k).x;
    ScalarField d_rur = detail::coordinate_derivative(rur, 0);
    ScalarField d_ut = detail::coordinate_derivative(ut, 1);
    ScalarField d_uz = detail::coordinate_derivative(uz, 2);
    for (std::size_t k = 0; k < g.dims[2]; ++k)
        for (std::size_t j = 0; j < g.dims[1]; ++j)
            for (std::size_t i = 0; i < g.dims[0]; ++i) {
                std::size_t n = g.index(i, j, k);
                double inv_r = 1.0 / g.node(i, j, k).x;
                out[n] = inv_r * d_rur[n] + inv_r * d_ut[n] + d_uz[n];
            }
    return out;
}

inline VectorField curl(const VectorField& u) {
    detail::require_finite(u, "curl");
    const Grid& g = u.grid;
    VectorField out(g);
    if (g.coords == CoordinateSystem::Cartesian) {
        ScalarField u1 = u.component(0), u2 = u.component(1), u3 = u.component(2);
        ScalarField u3y = detail::coordinate_derivative(u3, 1);
        ScalarField u2z = detail::coordinate_derivative(u2, 2);
        ScalarField u1z = detail::coordinate_derivative(u1, 2);
        ScalarField u3x = detail::coordinate_derivative(u3, 0);
        ScalarField u2x = detail::coordinate_derivative(u2, 0);
        ScalarField u1y = detail::coordinate_derivative(u1, 1);
        for (std::size_t n = 0; n < g.size(); ++n)
            out[n] = {u3y[n] - u2z[n], u1z[n] - u3x[n], u2x[n] - u1y[n]};
        return out;
    }
    // curl in orthonormal cylindrical components:
    //   r:     (1/r) duz/dtheta - dut/dz
    //   theta: dur/dz - duz/dr
    //   z:     (1/r) (d(r ut)/dr - dur/dtheta)
    ScalarField ur = u.component(0), ut = u.component(1), uz = u.component(2);
    ScalarField rut(g);
    for (std::size_t k = 0; k < g.dims[2]; ++k)
        for (std::size_t j = 0; j < g.dims[1]; ++j)
            for (std::size_t i = 0; i < g.dims[0]; ++i)
                rut.at(i, j, k) = g.node(i, j, k).x * u.at(i, j, k).y;
    ScalarField uz_t = detail::coordinate_derivative(uz, 1);
    ScalarField ut_z = detail::coordinate_derivative(ut, 2);
    ScalarField ur_z = detail::coordinate_derivative(ur, 2);
    ScalarField uz_r = detail::coordinate_derivative(uz, 0);
    ScalarField rut_r = detail::coordinate_derivative(rut, 0);
    ScalarField ur_t = detail::coordinate_derivative(ur, 1);
    for (std::size_t k = 0; k < g.dims[2]; ++k)
        for (std::size_t j = 0; j < g.dims[1]; ++j)
            for (std::size_t i = 0; i < g.dims[0]; ++i) {
                std::size_t n = g.index(i, j, k);
                double inv_r = 1.0 / g.node(i, j, k).x;
                out[n] = {inv_r * uz_t[n] - ut_z[n],
                          ur_z[n] - uz_r[n],
                          inv_r * (rut_r[n] - ur_t[n])};
            }
    return out;
}

inline ScalarField laplacian(const ScalarField& f) { return divergence(gradient(f)); }

namespace detail {

inline void require_unit(const VectorField& e, double tol = 1e-8) {
    for (const Vec3& v : e.values)
        if (std::abs(norm(v) - 1.0) > tol)
            throw NotUnit("directional_derivative: direction field is not unit length");
}

}  // namespace detail

// (e . grad) F for a scalar field; e must be unit pointwise.
inline ScalarField directional_derivative(const ScalarField& f, const VectorField& e) {
    detail::require_unit(e);
    VectorField gf = gradient(f);
    ScalarField out(f.grid);
    for (std::size_t n = 0; n < out.values.size(); ++n) out[n] = dot(e[n], gf[n]);
    return out;
}

// (e . grad) v for a vector field. On cylindrical grids this is the covariant
// derivative of v in the orthonormal frame, including the rotation of
// (r-hat, theta-hat) with theta.
inline VectorField directional_derivative(const VectorField& v, const VectorField& e) {
    detail::require_unit(e);
    const Grid& g = v.grid;
    VectorField gc0 = gradient(v.component(0));
    VectorField gc1 = gradient(v.component(1));
    VectorField gc2 = gradient(v.component(2));
    VectorField out(g);
    const bool cyl = g.coords == CoordinateSystem::CylindricalRZ;
    for (std::size_t k = 0; k < g.dims[2]; ++k)
        for (std::size_t j = 0; j < g.dims[1]; ++j)
            for (std::size_t i = 0; i < g.dims[0]; ++i) {
                std::size_t n = g.index(i, j, k);
                Vec3 w{dot(e[n], gc0[n]), dot(e[n], gc1[n]), dot(e[n], gc2[n])};
                if (cyl) {
                    double inv_r = 1.0 / g.node(i, j, k).x;
                    w.x -= e[n].y * v[n].y * inv_r;
                    w.y += e[n].y * v[n].x * inv_r;
                }
                out[n] = w;
            }
    return out;
}

}  // namespace beltrami
