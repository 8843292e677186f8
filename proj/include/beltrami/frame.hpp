#pragma once

#include <array>
#include <cmath>
#include <deque>
#include <vector>

#include "beltrami/ops.hpp"

namespace beltrami {

// Orthonormal frame adapted to the level surfaces of f: e3 = grad f / |grad f|,
// (e1, e2) tangent, principal where the surfaces have distinct curvatures.
struct AdaptedFrame {
    VectorField e1, e2, e3;
    std::size_t umbilic_count = 0;  // nodes where principal directions were ambiguous
    std::size_t seam_count = 0;     // nodes where continuity propagation was marginal
};

// Connection coefficients of the adapted frame, written as
//   omega^3_1 = h11 w1 + h12 w2 + g1 w3
//   omega^3_2 = h12 w1 + h22 w2 + g2 w3
//   omega^1_2 = k1 w1 + k2 w2 + k3 w3
// with g = -ln|grad f| and g_i its covariant derivatives. k_i are read off
// e2 derivatives: k_i = <(e_i . grad) e2, e1>.
struct FrameInvariants {
    ScalarField g, g1, g2, g3;
    ScalarField h11, h12, h22;
    ScalarField k1, k2, k3;
    ScalarField h1, h2;  // (h11+h22)/2 and (h11-h22)/2
};

enum class FramePolicy {
    RequirePrincipal,        // fail on umbilic points
    AllowUmbilicCompletion,  // fall back to a smooth orthonormal completion
};

struct FrameOptions {
    FramePolicy policy = FramePolicy::AllowUmbilicCompletion;
    // Umbilic when |lambda1 - lambda2| <= umbilic_eps * (1 + mean curvature scale).
    double umbilic_eps = 1e-6;
};

namespace detail {

// (t . grad) v at node n from precomputed component gradients of v,
// including the cylindrical frame rotation terms.
inline Vec3 contract_jacobian(const Grid& g, std::size_t n, double inv_r, const Vec3& t,
                              const Vec3& v, const VectorField& gc0, const VectorField& gc1,
                              const VectorField& gc2) {
    Vec3 w{dot(t, gc0[n]), dot(t, gc1[n]), dot(t, gc2[n])};
    if (g.coords == CoordinateSystem::CylindricalRZ) {
        w.x -= t.y * v.y * inv_r;
        w.y += t.y * v.x * inv_r;
    }
    return w;
}

inline Vec3 normalize(const Vec3& v) { return v / norm(v); }

// Deterministic tangent completion: a single component axis is chosen for
// the whole grid (the one whose worst-case alignment with e3 is smallest),
// then projected out of e3 at each node. A per-node choice would flip
// between tied axes on rounding noise, and finite differences of the
// resulting frame would be garbage on umbilic geometries.
inline Vec3 seed_axis(const VectorField& e3) {
    double worst[3] = {0.0, 0.0, 0.0};
    for (const Vec3& e : e3.values)
        for (int a = 0; a < 3; ++a) worst[a] = std::max(worst[a], std::abs(e[a]));
    int best = 0;
    for (int a = 1; a < 3; ++a)
        if (worst[a] < worst[best] - 1e-12) best = a;
    Vec3 axis{};
    axis[best] = 1.0;
    return axis;
}

inline Vec3 tangent_seed(const Vec3& axis, const Vec3& e3) {
    return normalize(axis - dot(axis, e3) * e3);
}

}  // namespace detail

inline AdaptedFrame adapted_frame(const ScalarField& f, double grad_tol = 1e-8,
                                  const FrameOptions& opts = {}) {
    detail::require_finite(f, "adapted_frame");
    const Grid& g = f.grid;
    VectorField gf = gradient(f);
    AdaptedFrame fr;
    fr.e1 = VectorField(g);
    fr.e2 = VectorField(g);
    fr.e3 = VectorField(g);
    for (std::size_t n = 0; n < g.size(); ++n) {
        double m = norm(gf[n]);
        if (!(m >= grad_tol))
            throw GradientTooSmall("adapted_frame: |grad f| < tol at node " + std::to_string(n));
        fr.e3[n] = gf[n] / m;
    }

    VectorField gc0 = gradient(fr.e3.component(0));
    VectorField gc1 = gradient(fr.e3.component(1));
    VectorField gc2 = gradient(fr.e3.component(2));

    std::vector<char> umbilic(g.size(), 0);
    const bool cyl = g.coords == CoordinateSystem::CylindricalRZ;
    const Vec3 axis = detail::seed_axis(fr.e3);
    for (std::size_t k = 0; k < g.dims[2]; ++k)
        for (std::size_t j = 0; j < g.dims[1]; ++j)
            for (std::size_t i = 0; i < g.dims[0]; ++i) {
                std::size_t n = g.index(i, j, k);
                double inv_r = cyl ? 1.0 / g.node(i, j, k).x : 1.0;
                Vec3 e3 = fr.e3[n];
                Vec3 t1 = detail::tangent_seed(axis, e3);
                Vec3 t2 = cross(e3, t1);
                // Shape operator S(X) = -(X . grad) e3 on the tangent plane.
                Vec3 d1 = detail::contract_jacobian(g, n, inv_r, t1, e3, gc0, gc1, gc2);
                Vec3 d2 = detail::contract_jacobian(g, n, inv_r, t2, e3, gc0, gc1, gc2);
                double s11 = -dot(d1, t1);
                double s22 = -dot(d2, t2);
                double s12 = -0.5 * (dot(d1, t2) + dot(d2, t1));
                double theta = 0.5 * std::atan2(2.0 * s12, s11 - s22);
                double c = std::cos(theta), s = std::sin(theta);
                Vec3 v1 = c * t1 + s * t2;
                Vec3 v2 = -s * t1 + c * t2;
                double l1 = s11 * c * c + 2.0 * s12 * c * s + s22 * s * s;
                double l2 = s11 * s * s - 2.0 * s12 * c * s + s22 * c * c;
                // e1 carries the dominant curvature (|l1| >= |l2|), matching
                // the concentric-cylinder normal form where the curved
                // principal direction comes first.
                if (std::abs(l1) < std::abs(l2)) {
                    std::swap(v1, v2);
                    std::swap(l1, l2);
                }
                double mean_scale = 0.5 * std::abs(l1 + l2);
                if (std::abs(l1 - l2) <= opts.umbilic_eps * (1.0 + mean_scale)) {
                    umbilic[n] = 1;
                    fr.e1[n] = t1;
                } else {
                    fr.e1[n] = v1;
                }
                fr.e2[n] = cross(e3, fr.e1[n]);
            }

    fr.umbilic_count = 0;
    for (char u : umbilic) fr.umbilic_count += u;
    if (opts.policy == FramePolicy::RequirePrincipal && fr.umbilic_count > 0)
        throw AmbiguousPrincipalDirections(
            "adapted_frame: " + std::to_string(fr.umbilic_count) +
            " umbilic nodes; principal directions are not well defined");

    // Continuity propagation of the e1 sign: BFS over nearest neighbors from
    // the lowest-index interior node. Any smooth choice of sign is valid;
    // marginal alignments are counted as seam nodes and reported.
    std::size_t seed = g.index(g.axis_used(0) ? 1 : 0, g.axis_used(1) ? 1 : 0,
                               g.axis_used(2) ? 1 : 0);
    std::vector<char> visited(g.size(), 0);
    std::deque<std::size_t> queue{seed};
    visited[seed] = 1;
    fr.seam_count = 0;
    auto coords_of = [&](std::size_t n, std::size_t c[3]) {
        c[0] = n % g.dims[0];
        c[1] = (n / g.dims[0]) % g.dims[1];
        c[2] = n / (g.dims[0] * g.dims[1]);
    };
    while (!queue.empty()) {
        std::size_t n = queue.front();
        queue.pop_front();
        std::size_t c[3];
        coords_of(n, c);
        for (int a = 0; a < 3; ++a)
            for (int d = -1; d <= 1; d += 2) {
                if (d < 0 && c[a] == 0) continue;
                if (d > 0 && c[a] + 1 >= g.dims[a]) continue;
                std::size_t cc[3] = {c[0], c[1], c[2]};
                cc[a] += d;
                std::size_t m = g.index(cc[0], cc[1], cc[2]);
                if (visited[m]) continue;
                visited[m] = 1;
                double align = dot(fr.e1[m], fr.e1[n]);
                if (align < 0.0) {
                    fr.e1[m] = -fr.e1[m];
                    fr.e2[m] = -fr.e2[m];
                    align = -align;
                }
                if (align < 0.1) ++fr.seam_count;
                queue.push_back(m);
            }
    }
    return fr;
}

inline FrameInvariants frame_invariants(const ScalarField& f, const AdaptedFrame& fr) {
    const Grid& gr = f.grid;
    VectorField gf = gradient(f);
    FrameInvariants inv;
    inv.g = ScalarField(gr);
    for (std::size_t n = 0; n < gr.size(); ++n) {
        double m = norm(gf[n]);
        if (!(m > 0.0)) throw GradientTooSmall("frame_invariants: grad f vanishes");
        inv.g[n] = -std::log(m);
    }
    inv.g1 = directional_derivative(inv.g, fr.e1);
    inv.g2 = directional_derivative(inv.g, fr.e2);
    inv.g3 = directional_derivative(inv.g, fr.e3);

    // h_ij from derivatives of e3 rather than of (e1, e2): e3 is smooth
    // wherever grad f is, while the tangent pair may rotate abruptly between
    // near-umbilic nodes, which would poison its finite differences.
    VectorField d1e3 = directional_derivative(fr.e3, fr.e1);
    VectorField d2e3 = directional_derivative(fr.e3, fr.e2);
    VectorField d1e2 = directional_derivative(fr.e2, fr.e1);
    VectorField d2e2 = directional_derivative(fr.e2, fr.e2);
    VectorField d3e2 = directional_derivative(fr.e2, fr.e3);

    inv.h11 = ScalarField(gr);
    inv.h12 = ScalarField(gr);
    inv.h22 = ScalarField(gr);
    inv.k1 = ScalarField(gr);
    inv.k2 = ScalarField(gr);
    inv.k3 = ScalarField(gr);
    inv.h1 = ScalarField(gr);
    inv.h2 = ScalarField(gr);
    for (std::size_t n = 0; n < gr.size(); ++n) {
        inv.h11[n] = -dot(d1e3[n], fr.e1[n]);
        inv.h12[n] = -0.5 * (dot(d2e3[n], fr.e1[n]) + dot(d1e3[n], fr.e2[n]));
        inv.h22[n] = -dot(d2e3[n], fr.e2[n]);
        inv.k1[n] = dot(d1e2[n], fr.e1[n]);
        inv.k2[n] = dot(d2e2[n], fr.e1[n]);
        inv.k3[n] = dot(d3e2[n], fr.e1[n]);
        inv.h1[n] = 0.5 * (inv.h11[n] + inv.h22[n]);
        inv.h2[n] = 0.5 * (inv.h11[n] - inv.h22[n]);
    }
    return inv;
}

// Pointwise mismatch between the frame's measured derivatives and the Cartan
// structure equations written with the parametrized connection forms. Near
// zero (at truncation order) when (frame, invariants) are consistent.
inline ScalarField structure_residual(const AdaptedFrame& fr, const FrameInvariants& inv) {
    const Grid& gr = fr.e1.grid;
    const VectorField* frame[3] = {&fr.e1, &fr.e2, &fr.e3};

    // Raw connection coefficients W[i][j][k] = omega^i_j(e_k) = <d_{e_k} e_j, e_i>.
    VectorField deriv[3][3];  // deriv[j][k] = (e_k . grad) e_j
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) deriv[j][k] = directional_derivative(*frame[j], *frame[k]);
    auto w_raw = [&](int i, int j, int k, std::size_t n) {
        return dot(deriv[j][k][n], (*frame[i])[n]);
    };

    // Parametrized connection forms as component triples.
    const ScalarField* s31[3] = {&inv.h11, &inv.h12, &inv.g1};
    const ScalarField* s32[3] = {&inv.h12, &inv.h22, &inv.g2};
    const ScalarField* s12[3] = {&inv.k1, &inv.k2, &inv.k3};

    // Covariant derivatives e_a(sigma_b) of every component field.
    ScalarField ds31[3][3], ds32[3][3], ds12[3][3];  // [component b][direction a]
    for (int b = 0; b < 3; ++b)
        for (int a = 0; a < 3; ++a) {
            ds31[b][a] = directional_derivative(*s31[b], *frame[a]);
            ds32[b][a] = directional_derivative(*s32[b], *frame[a]);
            ds12[b][a] = directional_derivative(*s12[b], *frame[a]);
        }

    ScalarField res(gr);
    for (std::size_t n = 0; n < gr.size(); ++n) {
        double worst = 0.0;
        // First structure equations: the raw coefficients must match the
        // parametrization (this encodes h12 symmetry and the g_i terms).
        for (int k = 0; k < 3; ++k) {
            worst = std::max(worst, std::abs(w_raw(2, 0, k, n) - (*s31[k])[n]));
            worst = std::max(worst, std::abs(w_raw(2, 1, k, n) - (*s32[k])[n]));
            worst = std::max(worst, std::abs(w_raw(0, 1, k, n) - (*s12[k])[n]));
        }
        // Structure constants of the frame: [e_a, e_b]^m.
        auto bracket = [&](int a, int b, int m) {
            return dot(deriv[b][a][n] - deriv[a][b][n], (*frame[m])[n]);
        };
        // d sigma(e_a, e_b) for sigma given by components s[] and derivatives ds[][].
        auto dsigma = [&](const ScalarField* s[3], ScalarField ds[3][3], int a, int b) {
            double v = ds[b][a][n] - ds[a][b][n];
            for (int m = 0; m < 3; ++m) v -= (*s[m])[n] * bracket(a, b, m);
            return v;
        };
        auto wedge = [&](const ScalarField* p[3], const ScalarField* q[3], int a, int b) {
            return (*p[a])[n] * (*q[b])[n] - (*p[b])[n] * (*q[a])[n];
        };
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                // d omega^3_1 = -omega^3_2 ^ omega^2_1 = omega^3_2 ^ omega^1_2
                worst = std::max(worst,
                                 std::abs(dsigma(s31, ds31, a, b) - wedge(s32, s12, a, b)));
                // d omega^3_2 = -omega^3_1 ^ omega^1_2
                worst = std::max(worst,
                                 std::abs(dsigma(s32, ds32, a, b) + wedge(s31, s12, a, b)));
                // d omega^1_2 = omega^3_1 ^ omega^3_2
                worst = std::max(worst,
                                 std::abs(dsigma(s12, ds12, a, b) - wedge(s31, s32, a, b)));
            }
        res[n] = worst;
    }
    return res;
}

enum class UmbilicType { TotallyUmbilic, NoUmbilicPoints, Mixed };

inline UmbilicType umbilic_classify(const FrameInvariants& inv, double eps) {
    bool all_umbilic = true, none_umbilic = true;
    // Decided over the interior (margin 2): the curvature fields come from
    // iterated one-sided stencils whose outermost layers exceed eps-scale
    // tolerances even on exactly umbilic geometries.
    for_interior(inv.h1.grid, 2, [&](std::size_t n) {
        bool umb = std::abs(inv.h2[n]) <= eps * (1.0 + std::abs(inv.h1[n]));
        all_umbilic = all_umbilic && umb;
        none_umbilic = none_umbilic && !umb;
    });
    if (all_umbilic) return UmbilicType::TotallyUmbilic;
    if (none_umbilic) return UmbilicType::NoUmbilicPoints;
    return UmbilicType::Mixed;
}

}  // namespace beltrami
