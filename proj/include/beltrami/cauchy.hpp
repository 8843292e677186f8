#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "beltrami/ops.hpp"
#include "beltrami/parallel.hpp"

namespace beltrami {

// Initial data on a doubly periodic (x1, x2) slice at height x3. Nodes cover
// [x0, x0+nx*hx) × [y0, y0+ny*hy); the right/top edges are identified with
// the left/bottom ones.
struct CauchySlice {
    std::size_t nx = 0, ny = 0;
    double hx = 0.0, hy = 0.0;
    double x0 = 0.0, y0 = 0.0;
    double x3 = 0.0;
    std::vector<double> u1, u2, u3;

    std::size_t index(std::size_t i, std::size_t j) const { return i + nx * j; }
    std::size_t size() const { return nx * ny; }

    template <class F>  // F(x, y) -> Vec3
    static CauchySlice sample(std::size_t nx, std::size_t ny, double hx, double hy, double x0,
                              double y0, double x3, F&& fn) {
        CauchySlice s;
        s.nx = nx;
        s.ny = ny;
        s.hx = hx;
        s.hy = hy;
        s.x0 = x0;
        s.y0 = y0;
        s.x3 = x3;
        s.u1.resize(nx * ny);
        s.u2.resize(nx * ny);
        s.u3.resize(nx * ny);
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) {
                Vec3 v = fn(x0 + i * hx, y0 + j * hy);
                s.u1[s.index(i, j)] = v.x;
                s.u2[s.index(i, j)] = v.y;
                s.u3[s.index(i, j)] = v.z;
            }
        return s;
    }
};

namespace detail {

using cd = std::complex<double>;

// In-place FFT: iterative radix-2 for power-of-two lengths, direct transform
// otherwise (the fallback is quadratic and only meant for odd test sizes).
inline void fft(std::vector<cd>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    const double sign = inverse ? 1.0 : -1.0;
    if ((n & (n - 1)) != 0) {
        std::vector<cd> out(n, cd(0.0));
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t m = 0; m < n; ++m) {
                double ang = sign * 2.0 * std::numbers::pi * double(k) * double(m) / double(n);
                out[k] += a[m] * cd(std::cos(ang), std::sin(ang));
            }
        a = std::move(out);
    } else {
        for (std::size_t i = 1, j = 0; i < n; ++i) {
            std::size_t bit = n >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(a[i], a[j]);
        }
        for (std::size_t len = 2; len <= n; len <<= 1) {
            double ang = sign * 2.0 * std::numbers::pi / double(len);
            cd wl(std::cos(ang), std::sin(ang));
            for (std::size_t i = 0; i < n; i += len) {
                cd w(1.0);
                for (std::size_t k = 0; k < len / 2; ++k) {
                    cd u = a[i + k], v = a[i + k + len / 2] * w;
                    a[i + k] = u + v;
                    a[i + k + len / 2] = u - v;
                    w *= wl;
                }
            }
        }
    }
    if (inverse)
        for (cd& v : a) v /= double(n);
}

// Signed integer wavenumber of mode m on an n-point grid.
inline long wavenumber(std::size_t m, std::size_t n) {
    return m <= n / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
}

// Applies `xform(line)` to every grid line of a nx×ny array along `axis`.
template <class F>
inline void for_each_line(std::vector<double>& a, std::size_t nx, std::size_t ny, int axis,
                          F&& xform) {
    const std::size_t nlines = axis == 0 ? ny : nx;
    const std::size_t len = axis == 0 ? nx : ny;
    parallel_for(nlines, [&](std::size_t l) {
        std::vector<cd> line(len);
        for (std::size_t m = 0; m < len; ++m)
            line[m] = a[axis == 0 ? m + nx * l : l + nx * m];
        xform(line);
        for (std::size_t m = 0; m < len; ++m)
            a[axis == 0 ? m + nx * l : l + nx * m] = line[m].real();
    });
}

inline void spectral_derivative(std::vector<double>& a, std::size_t nx, std::size_t ny, int axis,
                                double h) {
    const std::size_t len = axis == 0 ? nx : ny;
    const double period = double(len) * h;
    for_each_line(a, nx, ny, axis, [&](std::vector<cd>& line) {
        fft(line, false);
        for (std::size_t m = 0; m < len; ++m) {
            long k = wavenumber(m, len);
            // the unpaired Nyquist mode has no well-defined derivative phase
            if (len % 2 == 0 && m == len / 2) k = 0;
            line[m] *= cd(0.0, 2.0 * std::numbers::pi * double(k) / period);
        }
        fft(line, true);
    });
}

inline void spectral_filter(std::vector<double>& a, std::size_t nx, std::size_t ny,
                            double filter_frac) {
    if (filter_frac >= 1.0) return;
    for (int axis = 0; axis < 2; ++axis) {
        const std::size_t len = axis == 0 ? nx : ny;
        const double cutoff = filter_frac * double(len) / 2.0;
        for_each_line(a, nx, ny, axis, [&](std::vector<cd>& line) {
            fft(line, false);
            for (std::size_t m = 0; m < len; ++m)
                if (std::abs(double(wavenumber(m, len))) > cutoff) line[m] = cd(0.0);
            fft(line, true);
        });
    }
}

}  // namespace detail

struct MarchOptions {
    double filter_frac = 2.0 / 3.0;
    double u3_min = 1e-6;
    double blowup_factor = 1e6;
};

// Marches the Cauchy-form system
//   d3 u1 = d1 u3 - (u2/u3) (d2 u1 - d1 u2)
//   d3 u2 = d2 u3 + (u1/u3) (d2 u1 - d1 u2)
//   d3 u3 = -(d1 u1 + d2 u2)
// from the initial slice through `depth` in x3 with RK4 and spectral slice
// derivatives, low-pass filtering after every step. The continuation is
// ill-posed for large depth; keep depth small and the filter on.
inline VectorField march(const CauchySlice& initial, double depth, std::size_t steps,
                         const MarchOptions& opts = {}) {
    if (initial.nx < 5 || initial.ny < 5)
        throw DomainError("march: slice must have at least 5 nodes per direction");
    if (steps < 4) throw DomainError("march: need at least 4 steps");

    const std::size_t nx = initial.nx, ny = initial.ny, npts = nx * ny;
    const double dz = depth / double(steps);

    Grid grid;
    grid.origin = {initial.x0, initial.y0, initial.x3};
    grid.spacing = {initial.hx, initial.hy, dz};
    grid.dims = {nx, ny, steps + 1};
    grid.coords = CoordinateSystem::Cartesian;
    grid.validate();
    VectorField out(grid);

    std::array<std::vector<double>, 3> u = {initial.u1, initial.u2, initial.u3};
    double init_norm = 0.0;
    for (const auto& comp : u)
        for (double v : comp) init_norm = std::max(init_norm, std::abs(v));

    auto check = [&](const std::array<std::vector<double>, 3>& s) {
        for (std::size_t n = 0; n < npts; ++n) {
            if (std::abs(s[2][n]) < opts.u3_min)
                throw U3Vanished("march: |u3| fell below u3_min");
            for (int c = 0; c < 3; ++c) {
                if (!std::isfinite(s[c][n]) ||
                    std::abs(s[c][n]) > opts.blowup_factor * std::max(init_norm, 1.0))
                    throw BlowUp("march: field exceeded the blow-up guard");
            }
        }
    };
    check(u);

    auto rhs = [&](const std::array<std::vector<double>, 3>& s) {
        std::array<std::vector<double>, 3> d;
        std::vector<double> d1u1 = s[0], d2u1 = s[0], d1u2 = s[1], d2u2 = s[1];
        std::vector<double> d1u3 = s[2], d2u3 = s[2];
        detail::spectral_derivative(d1u1, nx, ny, 0, initial.hx);
        detail::spectral_derivative(d2u1, nx, ny, 1, initial.hy);
        detail::spectral_derivative(d1u2, nx, ny, 0, initial.hx);
        detail::spectral_derivative(d2u2, nx, ny, 1, initial.hy);
        detail::spectral_derivative(d1u3, nx, ny, 0, initial.hx);
        detail::spectral_derivative(d2u3, nx, ny, 1, initial.hy);
        d[0].resize(npts);
        d[1].resize(npts);
        d[2].resize(npts);
        for (std::size_t n = 0; n < npts; ++n) {
            double vort = d2u1[n] - d1u2[n];  // x3-component of curl, negated
            double inv3 = 1.0 / s[2][n];
            d[0][n] = d1u3[n] - s[1][n] * inv3 * vort;
            d[1][n] = d2u3[n] + s[0][n] * inv3 * vort;
            d[2][n] = -(d1u1[n] + d2u2[n]);
        }
        return d;
    };

    auto store = [&](std::size_t layer, const std::array<std::vector<double>, 3>& s) {
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) {
                std::size_t n = initial.index(i, j);
                out.at(i, j, layer) = {s[0][n], s[1][n], s[2][n]};
            }
    };
    store(0, u);

    for (std::size_t step = 0; step < steps; ++step) {
        auto advance = [&](const std::array<std::vector<double>, 3>& base,
                           const std::array<std::vector<double>, 3>& slope, double factor) {
            std::array<std::vector<double>, 3> r;
            for (int c = 0; c < 3; ++c) {
                r[c].resize(npts);
                for (std::size_t n = 0; n < npts; ++n)
                    r[c][n] = base[c][n] + factor * slope[c][n];
            }
            return r;
        };
        auto k1 = rhs(u);
        auto k2 = rhs(advance(u, k1, 0.5 * dz));
        auto k3 = rhs(advance(u, k2, 0.5 * dz));
        auto k4 = rhs(advance(u, k3, dz));
        for (int c = 0; c < 3; ++c) {
            for (std::size_t n = 0; n < npts; ++n)
                u[c][n] += dz / 6.0 * (k1[c][n] + 2.0 * k2[c][n] + 2.0 * k3[c][n] + k4[c][n]);
            detail::spectral_filter(u[c], nx, ny, opts.filter_frac);
        }
        check(u);
        store(step + 1, u);
    }
    return out;
}

// Slice-derivative discretization for fields produced by (or compatible
// with) the march: Spectral assumes x1/x2 periodicity and is exact for
// band-limited data; FiniteDifference makes no periodicity assumption.
enum class SliceDerivative { FiniteDifference, Spectral };

namespace detail {

// d/dx or d/dy of a 3D scalar field, layer by layer, assuming each z-layer
// is periodic in both slice directions.
inline ScalarField spectral_slice_derivative(const ScalarField& s, int axis) {
    const Grid& gr = s.grid;
    const std::size_t nx = gr.dims[0], ny = gr.dims[1];
    ScalarField out = s;
    for (std::size_t k = 0; k < gr.dims[2]; ++k) {
        std::vector<double> layer(nx * ny);
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) layer[i + nx * j] = s.at(i, j, k);
        spectral_derivative(layer, nx, ny, axis, gr.spacing[axis]);
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) out.at(i, j, k) = layer[i + nx * j];
    }
    return out;
}

inline ScalarField slice_derivative(const ScalarField& s, int axis, SliceDerivative kind) {
    return kind == SliceDerivative::Spectral ? spectral_slice_derivative(s, axis)
                                             : coordinate_derivative(s, axis);
}

}  // namespace detail

// Recovers the proportionality factor from a field in Cauchy form: the third
// component of curl u = f u gives f = (d1 u2 - d2 u1) / u3.
inline ScalarField recover_f(const VectorField& u, double u3_min = 1e-6,
                             SliceDerivative kind = SliceDerivative::FiniteDifference) {
    ScalarField u1 = u.component(0), u2 = u.component(1);
    ScalarField d2u1 = detail::slice_derivative(u1, 1, kind);
    ScalarField d1u2 = detail::slice_derivative(u2, 0, kind);
    ScalarField f(u.grid);
    for (std::size_t n = 0; n < u.grid.size(); ++n) {
        if (std::abs(u[n].z) < u3_min) throw U3Vanished("recover_f: |u3| below u3_min");
        f[n] = (d1u2[n] - d2u1[n]) / u[n].z;
    }
    return f;
}

struct MarchResidual {
    double curl_res = 0.0;  // ||curl u - f u||_inf / ||u||_inf
    double div_res = 0.0;   // ||div u||_inf / ||grad u||_inf
};

// Residual check matched to the march discretization: spectral derivatives
// inside each periodic slice, finite differences across slices.
inline MarchResidual march_residual(const VectorField& u, const ScalarField& f) {
    auto d = [&](int comp, int axis) {
        ScalarField c = u.component(comp);
        return axis == 2 ? detail::coordinate_derivative(c, 2)
                         : detail::spectral_slice_derivative(c, axis);
    };
    ScalarField d1u1 = d(0, 0), d2u1 = d(0, 1), d3u1 = d(0, 2);
    ScalarField d1u2 = d(1, 0), d2u2 = d(1, 1), d3u2 = d(1, 2);
    ScalarField d1u3 = d(2, 0), d2u3 = d(2, 1), d3u3 = d(2, 2);
    double curl_sup = 0.0, u_sup = 0.0, div_sup = 0.0, grad_sup = 0.0;
    for (std::size_t n = 0; n < u.grid.size(); ++n) {
        Vec3 c{d2u3[n] - d3u2[n], d3u1[n] - d1u3[n], d1u2[n] - d2u1[n]};
        curl_sup = std::max(curl_sup, norm(c - f[n] * u[n]));
        u_sup = std::max(u_sup, norm(u[n]));
        div_sup = std::max(div_sup, std::abs(d1u1[n] + d2u2[n] + d3u3[n]));
        grad_sup = std::max({grad_sup, std::abs(d1u1[n]), std::abs(d2u1[n]), std::abs(d3u1[n]),
                             std::abs(d1u2[n]), std::abs(d2u2[n]), std::abs(d3u2[n]),
                             std::abs(d1u3[n]), std::abs(d2u3[n]), std::abs(d3u3[n])});
    }
    MarchResidual res;
    res.curl_res = curl_sup / std::max(u_sup, 1e-300);
    res.div_res = div_sup / std::max(grad_sup, 1e-300);
    return res;
}

}  // namespace beltrami
