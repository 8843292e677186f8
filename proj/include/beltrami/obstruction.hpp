#pragma once

#include <string>

#include "beltrami/frame.hpp"

namespace beltrami {

// Coefficients of the torsion-absorption condition
//   c_p1 * p1 + c_u1 * u1 + c_u2 * u2 = 0
// that gates whether f admits Beltrami fields at all, plus the second-level
// coefficient 2 k3 - f that drives the non-umbilic sub-branching.
struct TorsionReport {
    ScalarField c_p1, c_u1, c_u2;
    ScalarField second_level;  // 2 k3 - f
};

inline TorsionReport torsion_coefficients(const FrameInvariants& inv, const AdaptedFrame& fr,
                                          const ScalarField& f) {
    const Grid& gr = f.grid;
    ScalarField g13 = directional_derivative(inv.g1, fr.e3);
    ScalarField g23 = directional_derivative(inv.g2, fr.e3);
    ScalarField h11_1 = directional_derivative(inv.h11, fr.e1);
    ScalarField h22_1 = directional_derivative(inv.h22, fr.e1);
    ScalarField h11_2 = directional_derivative(inv.h11, fr.e2);
    ScalarField h22_2 = directional_derivative(inv.h22, fr.e2);

    TorsionReport rep;
    rep.c_p1 = ScalarField(gr);
    rep.c_u1 = ScalarField(gr);
    rep.c_u2 = ScalarField(gr);
    rep.second_level = ScalarField(gr);
    for (std::size_t n = 0; n < gr.size(); ++n) {
        double k3m2f = inv.k3[n] - 2.0 * f[n];
        rep.c_p1[n] = 2.0 * (inv.h11[n] - inv.h22[n]);
        rep.c_u1[n] = g13[n] + h11_1[n] - h22_1[n] - inv.g1[n] * inv.h22[n] + inv.g2[n] * k3m2f;
        rep.c_u2[n] = g23[n] + h22_2[n] - h11_2[n] - inv.g1[n] * k3m2f - inv.g2[n] * inv.h11[n];
        rep.second_level[n] = 2.0 * inv.k3[n] - f[n];
    }
    return rep;
}

enum class BeltramiCase {
    Case1_ParallelPlanes,
    Case1_ConcentricSpheres,
    Case2_UmbilicNoSolutions,
    Case3_NonUmbilic,
    Indeterminate_Mixed,
};

enum class SolutionSpace {
    TwoFunctionsOfOneVariable,
    None,
    AtMostFiniteDim,
    Unknown,
};

inline const char* to_string(BeltramiCase c) {
    switch (c) {
        case BeltramiCase::Case1_ParallelPlanes: return "Case1_ParallelPlanes";
        case BeltramiCase::Case1_ConcentricSpheres: return "Case1_ConcentricSpheres";
        case BeltramiCase::Case2_UmbilicNoSolutions: return "Case2_UmbilicNoSolutions";
        case BeltramiCase::Case3_NonUmbilic: return "Case3_NonUmbilic";
        case BeltramiCase::Indeterminate_Mixed: return "Indeterminate_Mixed";
    }
    return "?";
}

inline const char* to_string(SolutionSpace s) {
    switch (s) {
        case SolutionSpace::TwoFunctionsOfOneVariable: return "TwoFunctionsOfOneVariable";
        case SolutionSpace::None: return "None";
        case SolutionSpace::AtMostFiniteDim: return "AtMostFiniteDim";
        case SolutionSpace::Unknown: return "Unknown";
    }
    return "?";
}

struct Classification {
    BeltramiCase kase = BeltramiCase::Indeterminate_Mixed;
    bool second_level_vanishes = false;  // meaningful for Case3 only
    SolutionSpace predicted = SolutionSpace::Unknown;
    int predicted_dim = 0;  // meaningful for AtMostFiniteDim

    // Diagnostics: thresholds and interior sup norms actually used.
    double eps = 0.0;
    std::size_t margin = 0;
    double sup_c_p1 = 0.0, sup_c_u1 = 0.0, sup_c_u2 = 0.0, sup_second_level = 0.0;
    double sup_g1 = 0.0, sup_g2 = 0.0, sup_h = 0.0;
};

struct ClassifyOptions {
    double grad_tol = 1e-8;
    // Interior margin (in nodes) over which "identically zero / nonzero
    // everywhere" is decided; iterated one-sided stencils make the outermost
    // layers noisier than the trichotomy tolerance.
    std::size_t margin = 2;
};

// Decision tree for the existence trichotomy. "Identically zero" on a grid
// means interior sup-norm below eps times the field's natural scale.
inline Classification classify(const ScalarField& f, double eps,
                               const ClassifyOptions& opts = {}) {
    AdaptedFrame fr = adapted_frame(f, opts.grad_tol);
    FrameInvariants inv = frame_invariants(f, fr);
    TorsionReport tr = torsion_coefficients(inv, fr, f);

    const std::size_t m = opts.margin;
    Classification out;
    out.eps = eps;
    out.margin = m;
    out.sup_c_p1 = interior_sup_norm(tr.c_p1, m);
    out.sup_c_u1 = interior_sup_norm(tr.c_u1, m);
    out.sup_c_u2 = interior_sup_norm(tr.c_u2, m);
    out.sup_second_level = interior_sup_norm(tr.second_level, m);
    out.sup_g1 = interior_sup_norm(inv.g1, m);
    out.sup_g2 = interior_sup_norm(inv.g2, m);
    out.sup_h = interior_sup_norm(inv.h1, m);

    const double curvature_scale =
        1.0 + interior_sup_norm(inv.h11, m) + interior_sup_norm(inv.h22, m);
    const bool cp1_zero = out.sup_c_p1 <= eps * curvature_scale;
    const bool cp1_nonzero_everywhere = interior_min_abs(tr.c_p1, m) > eps * curvature_scale;

    if (cp1_zero) {
        // Totally umbilic level surfaces. Straight normal lines (g1 = g2 = 0)
        // put f in Case 1; otherwise no nonzero Beltrami fields exist.
        const double g_scale = 1.0 + interior_sup_norm(inv.g3, m);
        const bool normals_straight =
            out.sup_g1 <= eps * g_scale && out.sup_g2 <= eps * g_scale;
        if (normals_straight) {
            const bool h_zero = out.sup_h <= eps * curvature_scale;
            const bool h_nonzero = interior_min_abs(inv.h1, m) > eps * curvature_scale;
            if (h_zero) {
                out.kase = BeltramiCase::Case1_ParallelPlanes;
            } else if (h_nonzero) {
                out.kase = BeltramiCase::Case1_ConcentricSpheres;
            } else {
                out.kase = BeltramiCase::Indeterminate_Mixed;
                out.predicted = SolutionSpace::Unknown;
                return out;
            }
            out.predicted = SolutionSpace::TwoFunctionsOfOneVariable;
        } else {
            out.kase = BeltramiCase::Case2_UmbilicNoSolutions;
            out.predicted = SolutionSpace::None;
        }
        return out;
    }
    if (cp1_nonzero_everywhere) {
        out.kase = BeltramiCase::Case3_NonUmbilic;
        const double sl_scale =
            1.0 + 2.0 * interior_sup_norm(inv.k3, m) + interior_sup_norm(f, m);
        out.second_level_vanishes = out.sup_second_level <= eps * sl_scale;
        out.predicted = SolutionSpace::AtMostFiniteDim;
        out.predicted_dim = 3;
        return out;
    }
    out.kase = BeltramiCase::Indeterminate_Mixed;
    out.predicted = SolutionSpace::Unknown;
    return out;
}

}  // namespace beltrami
