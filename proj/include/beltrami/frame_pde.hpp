#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "beltrami/expr.hpp"
#include "beltrami/frame.hpp"

namespace beltrami {

// Components of u along (e1, e2); the normal component vanishes identically
// because Beltrami fields are tangent to the level surfaces of f.
struct TangentialField {
    ScalarField u1, u2;

    VectorField reconstruct(const AdaptedFrame& fr) const {
        VectorField u(u1.grid);
        for (std::size_t n = 0; n < u.values.size(); ++n)
            u[n] = u1[n] * fr.e1[n] + u2[n] * fr.e2[n];
        return u;
    }
};

// The four residuals of the first-order tangential/evolution system:
//   R1 = u2_1 - u1_2 - k1 u1 - k2 u2
//   R2 = u1_1 + u2_2 - (k2 - g1) u1 + (k1 + g2) u2
//   R3 = u1_3 - h11 u1 - (f - k3) u2
//   R4 = u2_3 - (k3 - f) u1 - h22 u2
// R1, R2 constrain u on each level surface; R3, R4 drive the evolution across
// the family of surfaces.
struct SystemResidual {
    ScalarField r1, r2, r3, r4;
};

inline SystemResidual system_residual(const TangentialField& tf, const FrameInvariants& inv,
                                      const AdaptedFrame& fr, const ScalarField& f) {
    const Grid& gr = f.grid;
    ScalarField u1_1 = directional_derivative(tf.u1, fr.e1);
    ScalarField u1_2 = directional_derivative(tf.u1, fr.e2);
    ScalarField u1_3 = directional_derivative(tf.u1, fr.e3);
    ScalarField u2_1 = directional_derivative(tf.u2, fr.e1);
    ScalarField u2_2 = directional_derivative(tf.u2, fr.e2);
    ScalarField u2_3 = directional_derivative(tf.u2, fr.e3);
    SystemResidual res{ScalarField(gr), ScalarField(gr), ScalarField(gr), ScalarField(gr)};
    for (std::size_t n = 0; n < gr.size(); ++n) {
        double u1 = tf.u1[n], u2 = tf.u2[n];
        res.r1[n] = u2_1[n] - u1_2[n] - inv.k1[n] * u1 - inv.k2[n] * u2;
        res.r2[n] = u1_1[n] + u2_2[n] - (inv.k2[n] - inv.g1[n]) * u1 +
                    (inv.k1[n] + inv.g2[n]) * u2;
        res.r3[n] = u1_3[n] - inv.h11[n] * u1 - (f[n] - inv.k3[n]) * u2;
        res.r4[n] = u2_3[n] - (inv.k3[n] - f[n]) * u1 - inv.h22[n] * u2;
    }
    return res;
}

struct EvolveResult {
    TangentialField evolved;
    double initial_residual = 0.0;  // sup |R1|,|R2| on the start slice
    double max_residual = 0.0;      // sup |R1|,|R2| over the evolved block
    double amplification = 0.0;     // max_residual / max(initial, floor)
    std::size_t slices = 0;         // slices marched (excluding the start slice)
    int marching_axis = -1;
    int direction = 0;
};

struct EvolveOptions {
    // Precondition: initial data must satisfy |R1|,|R2| <= initial_tol
    // relative to the data scale on the start slice.
    double initial_tol = 1e-3;
    // Alignment |e3 . axis| >= this everywhere on the marched block.
    double axis_align_tol = 1.0 - 1e-6;
};

// Integrates R3 = R4 = 0 as ODEs along the integral curves of e3, which must
// be aligned with one grid axis (the geometries of interest — parallel planes
// and planes through the axis — both have grid-aligned normals; arbitrary
// curved transversals would need scattered-data resampling to evaluate the
// tangential residuals and are out of scope here). RK4 in arc length with
// coefficients linearly interpolated between slices. Returns the marched data
// together with a compatibility diagnostic: how the tangential residual
// R1, R2 behaves under the evolution.
inline EvolveResult evolve_level_surfaces(const TangentialField& initial,
                                          const FrameInvariants& inv, const AdaptedFrame& fr,
                                          const ScalarField& f, std::size_t start_slice,
                                          double arc_range, double step,
                                          const EvolveOptions& opts = {}) {
    const Grid& gr = f.grid;

    // Identify the axis everywhere aligned with e3.
    int axis = -1, dir = 0;
    for (int a = 0; a < 3 && axis < 0; ++a) {
        if (!gr.axis_used(a)) continue;
        Vec3 unit{};
        unit[a] = 1.0;
        double min_dot = 2.0, max_dot = -2.0;
        for (const Vec3& e : fr.e3.values) {
            double d = dot(e, unit);
            min_dot = std::min(min_dot, d);
            max_dot = std::max(max_dot, d);
        }
        if (min_dot >= opts.axis_align_tol) { axis = a; dir = +1; }
        if (max_dot <= -opts.axis_align_tol) { axis = a; dir = -1; }
    }
    if (axis < 0)
        throw StepOutOfDomain(
            "evolve_level_surfaces: e3 is not aligned with a grid axis; "
            "level surfaces must be grid slices");
    if (start_slice >= gr.dims[axis])
        throw StepOutOfDomain("evolve_level_surfaces: start slice outside the grid");

    // Copy the start-slice data across the whole grid so tangential stencils
    // near the block boundary see benign values, then overwrite by marching.
    TangentialField state{ScalarField(gr), ScalarField(gr)};
    auto for_slice = [&](std::size_t s, auto&& body) {
        std::array<std::size_t, 3> lo{0, 0, 0}, hi{gr.dims[0], gr.dims[1], gr.dims[2]};
        lo[axis] = s;
        hi[axis] = s + 1;
        for (std::size_t k = lo[2]; k < hi[2]; ++k)
            for (std::size_t j = lo[1]; j < hi[1]; ++j)
                for (std::size_t i = lo[0]; i < hi[0]; ++i) body(i, j, k);
    };
    for (std::size_t s = 0; s < gr.dims[axis]; ++s)
        for_slice(s, [&](std::size_t i, std::size_t j, std::size_t k) {
            std::size_t c[3] = {i, j, k};
            c[axis] = start_slice;
            std::size_t src = gr.index(c[0], c[1], c[2]);
            state.u1.at(i, j, k) = initial.u1[src];
            state.u2.at(i, j, k) = initial.u2[src];
        });

    // Check the precondition on the start slice.
    SystemResidual res0 = system_residual(state, inv, fr, f);
    double init_res = 0.0, data_scale = 0.0;
    for_slice(start_slice, [&](std::size_t i, std::size_t j, std::size_t k) {
        std::size_t n = gr.index(i, j, k);
        init_res = std::max({init_res, std::abs(res0.r1[n]), std::abs(res0.r2[n])});
        data_scale = std::max({data_scale, std::abs(state.u1[n]), std::abs(state.u2[n])});
    });
    if (init_res > opts.initial_tol * (1.0 + data_scale))
        throw IncompatibleInitialData(
            "evolve_level_surfaces: initial data violates the tangential system "
            "(residual " + std::to_string(init_res) + ")");

    // How many slices fit in arc_range (conservatively, using the smallest
    // metric scale so every node stays within range).
    double min_scale = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < gr.dims[0]; ++i)
        min_scale = std::min(min_scale, gr.metric_scale(axis, i));
    std::size_t max_slices = static_cast<std::size_t>(
        std::floor(arc_range / (gr.spacing[axis] * min_scale)));
    std::size_t available = dir > 0 ? gr.dims[axis] - 1 - start_slice : start_slice;
    std::size_t nslices = std::min(max_slices, available);

    // RK4 for d(u1,u2)/ds = A(s) (u1,u2) with
    //   A = [ h11, f - k3 ; k3 - f, h22 ],
    // s the arc length along e3. Coefficients at fractional slice positions
    // are linear interpolations of their nodal values.
    auto coeffs_at = [&](std::size_t n0, std::size_t n1, double frac,
                         double out[4]) {
        auto lerp = [&](const ScalarField& s) { return (1.0 - frac) * s[n0] + frac * s[n1]; };
        double h11 = lerp(inv.h11), h22 = lerp(inv.h22), k3 = lerp(inv.k3), fv = lerp(f);
        out[0] = h11;
        out[1] = fv - k3;
        out[2] = k3 - fv;
        out[3] = h22;
    };

    std::size_t cur = start_slice;
    for (std::size_t s = 0; s < nslices; ++s) {
        std::size_t next = dir > 0 ? cur + 1 : cur - 1;
        for_slice(cur, [&](std::size_t i, std::size_t j, std::size_t k) {
            std::size_t c[3] = {i, j, k};
            std::size_t n_cur = gr.index(c[0], c[1], c[2]);
            c[axis] = next;
            std::size_t n_next = gr.index(c[0], c[1], c[2]);
            double arc = gr.spacing[axis] * gr.metric_scale(axis, i);
            int nsub = std::max(1, static_cast<int>(std::ceil(arc / step)));
            double ds = arc / nsub;
            double u1 = state.u1[n_cur], u2 = state.u2[n_cur];
            for (int sub = 0; sub < nsub; ++sub) {
                double s0 = static_cast<double>(sub) / nsub;
                double a0[4], ah[4], a1[4];
                coeffs_at(n_cur, n_next, s0, a0);
                coeffs_at(n_cur, n_next, s0 + 0.5 / nsub, ah);
                coeffs_at(n_cur, n_next, s0 + 1.0 / nsub, a1);
                auto rhs = [](const double a[4], double v1, double v2, double& d1, double& d2) {
                    d1 = a[0] * v1 + a[1] * v2;
                    d2 = a[2] * v1 + a[3] * v2;
                };
                double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
                rhs(a0, u1, u2, k1a, k1b);
                rhs(ah, u1 + 0.5 * ds * k1a, u2 + 0.5 * ds * k1b, k2a, k2b);
                rhs(ah, u1 + 0.5 * ds * k2a, u2 + 0.5 * ds * k2b, k3a, k3b);
                rhs(a1, u1 + ds * k3a, u2 + ds * k3b, k4a, k4b);
                u1 += ds / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
                u2 += ds / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
            }
            state.u1[n_next] = u1;
            state.u2[n_next] = u2;
        });
        cur = next;
    }

    if (!state.u1.finite() || !state.u2.finite())
        throw NonFiniteInput("evolve_level_surfaces: evolution produced non-finite values");

    // Compatibility: sup of |R1|, |R2| over the marched block (away from the
    // block edges along the marching axis).
    SystemResidual res = system_residual(state, inv, fr, f);
    double max_res = init_res;
    std::size_t blo = dir > 0 ? start_slice : cur, bhi = dir > 0 ? cur : start_slice;
    for (std::size_t s = blo; s + 1 <= bhi + 1; ++s) {
        if (s > blo + nslices) break;
        // stay two slices clear of the block edge so axis stencils read marched data
        if ((dir > 0 && s + 2 > bhi && bhi + 2 < gr.dims[axis]) ||
            (dir < 0 && s < blo + 2 && blo >= 2))
            continue;
        for_slice(s, [&](std::size_t i, std::size_t j, std::size_t k) {
            std::size_t n = gr.index(i, j, k);
            max_res = std::max({max_res, std::abs(res.r1[n]), std::abs(res.r2[n])});
        });
    }

    EvolveResult out;
    out.evolved = std::move(state);
    out.initial_residual = init_res;
    out.max_residual = max_res;
    out.amplification = max_res / std::max(init_res, 1e-12 * (1.0 + data_scale));
    out.slices = nslices;
    out.marching_axis = axis;
    out.direction = dir;
    return out;
}

// Samples of the cylinder ODE solution (u1, u2)(r).
struct CylinderSample {
    double r, u1, u2;
};

// RK4 for the reduced system on concentric cylinders:
//   u1' = -u1/r + phi(r) u2,   u2' = -phi(r) u1.
// phi is an expression in r. The solution space is exactly two-dimensional:
// solutions depend linearly on (u1_0, u2_0).
inline std::vector<CylinderSample> cylinder_ode_solve(const Expr& phi, double r0, double u1_0,
                                                      double u2_0, double r1, double step) {
    if (!(r0 > 0.0) || !(r1 > 0.0))
        throw DomainError("cylinder_ode_solve: interval must not touch r = 0");
    if (!(step > 0.0)) throw DomainError("cylinder_ode_solve: step must be positive");

    const double span = r1 - r0;
    const int nsteps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / step)));
    const double h = span / nsteps;

    auto phi_at = [&phi](double r) { return evaluate(phi, Bindings{}.set(Var::r, r)); };
    auto rhs = [&](double r, double v1, double v2, double& d1, double& d2) {
        double p = phi_at(r);
        d1 = -v1 / r + p * v2;
        d2 = -p * v1;
    };

    std::vector<CylinderSample> out;
    out.reserve(nsteps + 1);
    double r = r0, u1 = u1_0, u2 = u2_0;
    out.push_back({r, u1, u2});
    for (int i = 0; i < nsteps; ++i) {
        double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
        rhs(r, u1, u2, k1a, k1b);
        rhs(r + 0.5 * h, u1 + 0.5 * h * k1a, u2 + 0.5 * h * k1b, k2a, k2b);
        rhs(r + 0.5 * h, u1 + 0.5 * h * k2a, u2 + 0.5 * h * k2b, k3a, k3b);
        rhs(r + h, u1 + h * k3a, u2 + h * k3b, k4a, k4b);
        u1 += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        u2 += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        r = r0 + (i + 1) * h;
        out.push_back({r, u1, u2});
    }
    return out;
}

}  // namespace beltrami
