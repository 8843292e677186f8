#pragma once

#include <cmath>
#include <utility>
#include <variant>
#include <vector>

#include "beltrami/bessel.hpp"
#include "beltrami/expr.hpp"
#include "beltrami/frame_pde.hpp"
#include "beltrami/ops.hpp"

namespace beltrami {

// u = grad F for harmonic F; curl u = 0, so f == 0.
struct HarmonicGradientSpec {
    Expr F;  // in x, y, z
};

// u = (A sin(c x3) + C cos(c x2), B sin(c x1) + A cos(c x3),
//      C sin(c x2) + B cos(c x1)); curl u = c u.
struct ABCSpec {
    double A = 1.0, B = 1.0, C = 0.5, c = 1.0;
};

// Parallel-plane level sets: f = phi(z); u rotates a planar Cauchy–Riemann
// pair (v, w) by the cumulative angle Phi(z), Phi' = phi:
//   u1 = v cos(Phi) + w sin(Phi),  u2 = -v sin(Phi) + w cos(Phi),  u3 = 0.
// (w, v) must make w + i v holomorphic in x + i y.
struct PlanarCRSpec {
    Expr phi;   // in z
    Expr v, w;  // in x, y
    double cr_tol = 1e-3;
};

// Concentric-cylinder level sets: f = phi(r); (u_theta, u_z) from the radial
// ODE system integrated out of (u1_0, u2_0) at r0.
struct CylinderSpec {
    Expr phi;  // in r
    double u1_0 = 0.0, u2_0 = 1.0, r0 = 1.0;
};

// The constant-factor special case of CylinderSpec in closed Bessel form:
// u_theta = J1(c r), u_z = J0(c r), f == c.
struct LundquistSpec {
    double c = 1.0;
};

struct OracleSpec {
    std::variant<HarmonicGradientSpec, ABCSpec, PlanarCRSpec, CylinderSpec, LundquistSpec> kind;
    Grid grid;
};

namespace detail {

// Cumulative integral of phi(z) along the grid's z-nodes by composite
// 5-point Gauss–Legendre, anchored at the first node.
inline std::vector<double> cumulative_phi(const Expr& phi, const Grid& gr) {
    static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                 0.5384693101056831, 0.9061798459386640};
    static const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                 0.4786286704993665, 0.2369268850561891};
    std::vector<double> Phi(gr.dims[2], 0.0);
    for (std::size_t k = 0; k + 1 < gr.dims[2]; ++k) {
        double a = gr.origin.z + double(k) * gr.spacing[2];
        double mid = a + 0.5 * gr.spacing[2], half = 0.5 * gr.spacing[2];
        double cell = 0.0;
        for (int q = 0; q < 5; ++q)
            cell += gw[q] * evaluate(phi, Bindings{}.set(Var::z, mid + half * gx[q]));
        Phi[k + 1] = Phi[k] + half * cell;
    }
    return Phi;
}

inline void check_cr_pair(const PlanarCRSpec& s, const Grid& gr) {
    ScalarField v(gr), w(gr);
    for (std::size_t k = 0; k < gr.dims[2]; ++k)
        for (std::size_t j = 0; j < gr.dims[1]; ++j)
            for (std::size_t i = 0; i < gr.dims[0]; ++i) {
                Vec3 p = gr.node(i, j, k);
                Bindings env;
                env.set(Var::x, p.x).set(Var::y, p.y);
                v.at(i, j, k) = evaluate(s.v, env);
                w.at(i, j, k) = evaluate(s.w, env);
            }
    ScalarField vx = coordinate_derivative(v, 0), vy = coordinate_derivative(v, 1);
    ScalarField wx = coordinate_derivative(w, 0), wy = coordinate_derivative(w, 1);
    double res = 0.0, scale = 1.0 + sup_norm(v) + sup_norm(w);
    for (std::size_t n = 0; n < gr.size(); ++n)
        res = std::max({res, std::abs(wx[n] - vy[n]), std::abs(vx[n] + wy[n])});
    if (res > s.cr_tol * scale)
        throw CRViolation("oracle: (w, v) is not a Cauchy-Riemann pair on this grid (residual " +
                          std::to_string(res) + ")");
}

}  // namespace detail

inline std::pair<VectorField, ScalarField> materialize(const OracleSpec& spec) {
    const Grid& gr = spec.grid;
    gr.validate();
    VectorField u(gr);
    ScalarField f(gr);

    if (const auto* hg = std::get_if<HarmonicGradientSpec>(&spec.kind)) {
        if (gr.coords != CoordinateSystem::Cartesian)
            throw DomainError("oracle: harmonic-gradient kind needs a Cartesian grid");
        Expr Fx = differentiate(hg->F, Var::x);
        Expr Fy = differentiate(hg->F, Var::y);
        Expr Fz = differentiate(hg->F, Var::z);
        u = sample(gr, [&](Vec3 p) -> Vec3 {
            Bindings env;
            env.set(Var::x, p.x).set(Var::y, p.y).set(Var::z, p.z);
            return {evaluate(Fx, env), evaluate(Fy, env), evaluate(Fz, env)};
        });
    } else if (const auto* abc = std::get_if<ABCSpec>(&spec.kind)) {
        if (gr.coords != CoordinateSystem::Cartesian)
            throw DomainError("oracle: ABC kind needs a Cartesian grid");
        double A = abc->A, B = abc->B, C = abc->C, c = abc->c;
        u = sample(gr, [&](Vec3 p) -> Vec3 {
            return {A * std::sin(c * p.z) + C * std::cos(c * p.y),
                    B * std::sin(c * p.x) + A * std::cos(c * p.z),
                    C * std::sin(c * p.y) + B * std::cos(c * p.x)};
        });
        for (std::size_t n = 0; n < gr.size(); ++n) f[n] = c;
    } else if (const auto* cr = std::get_if<PlanarCRSpec>(&spec.kind)) {
        if (gr.coords != CoordinateSystem::Cartesian)
            throw DomainError("oracle: planar kind needs a Cartesian grid");
        detail::check_cr_pair(*cr, gr);
        std::vector<double> Phi = detail::cumulative_phi(cr->phi, gr);
        for (std::size_t k = 0; k < gr.dims[2]; ++k) {
            double cP = std::cos(Phi[k]), sP = std::sin(Phi[k]);
            double z = gr.origin.z + double(k) * gr.spacing[2];
            double fz = evaluate(cr->phi, Bindings{}.set(Var::z, z));
            for (std::size_t j = 0; j < gr.dims[1]; ++j)
                for (std::size_t i = 0; i < gr.dims[0]; ++i) {
                    Vec3 p = gr.node(i, j, k);
                    Bindings env;
                    env.set(Var::x, p.x).set(Var::y, p.y);
                    double v = evaluate(cr->v, env), w = evaluate(cr->w, env);
                    u.at(i, j, k) = {v * cP + w * sP, -v * sP + w * cP, 0.0};
                    f.at(i, j, k) = fz;
                }
        }
    } else if (const auto* cyl = std::get_if<CylinderSpec>(&spec.kind)) {
        if (gr.coords != CoordinateSystem::CylindricalRZ)
            throw DomainError("oracle: cylinder kind needs an (r, theta, z) grid");
        double step = gr.spacing[0] / 16.0;
        for (std::size_t i = 0; i < gr.dims[0]; ++i) {
            double r = gr.origin.x + double(i) * gr.spacing[0];
            auto sol = cylinder_ode_solve(cyl->phi, cyl->r0, cyl->u1_0, cyl->u2_0, r, step);
            double u1 = sol.back().u1, u2 = sol.back().u2;
            double fr = evaluate(cyl->phi, Bindings{}.set(Var::r, r));
            for (std::size_t k = 0; k < gr.dims[2]; ++k)
                for (std::size_t j = 0; j < gr.dims[1]; ++j) {
                    u.at(i, j, k) = {0.0, u1, u2};
                    f.at(i, j, k) = fr;
                }
        }
    } else {
        const auto& lq = std::get<LundquistSpec>(spec.kind);
        if (gr.coords != CoordinateSystem::CylindricalRZ)
            throw DomainError("oracle: Lundquist kind needs an (r, theta, z) grid");
        for (std::size_t i = 0; i < gr.dims[0]; ++i) {
            double r = gr.origin.x + double(i) * gr.spacing[0];
            double ut = bessel_j1(lq.c * r), uz = bessel_j0(lq.c * r);
            for (std::size_t k = 0; k < gr.dims[2]; ++k)
                for (std::size_t j = 0; j < gr.dims[1]; ++j) {
                    u.at(i, j, k) = {0.0, ut, uz};
                    f.at(i, j, k) = lq.c;
                }
        }
    }
    return {std::move(u), std::move(f)};
}

}  // namespace beltrami
