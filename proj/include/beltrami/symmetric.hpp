#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "beltrami/expr.hpp"
#include "beltrami/ops.hpp"

namespace beltrami {

struct VerifyReport {
    double curl_res = 0.0;   // ||curl u - f u||_inf / max(||u||_inf, eps)
    double div_res = 0.0;    // ||div u||_inf / max(||grad u||_inf, eps)
    double ortho_res = 0.0;  // ||u . grad f||_inf / (||u||_inf ||grad f||_inf)
};

inline VerifyReport verify_beltrami(const VectorField& u, const ScalarField& f) {
    if (!u.grid.same_layout(f.grid))
        throw DomainError("verify_beltrami: u and f live on different grids");
    const double eps = 1e-300;
    VectorField cu = curl(u);
    ScalarField du = divergence(u);
    VectorField gf = gradient(f);

    double u_sup = 0.0, grad_u_sup = 0.0, gf_sup = 0.0;
    for (std::size_t n = 0; n < u.grid.size(); ++n) {
        u_sup = std::max(u_sup, norm(u[n]));
        gf_sup = std::max(gf_sup, norm(gf[n]));
    }
    // Residual sups are taken over the interior (margin 2 on used axes):
    // candidate fields are often themselves numerical derivatives, and the
    // composition of one-sided boundary stencils degrades to first order in
    // the outermost layers while the interior stays second order.
    double curl_sup = 0.0, div_sup = 0.0, dot_sup = 0.0;
    for_interior(u.grid, 2, [&](std::size_t n) {
        curl_sup = std::max(curl_sup, norm(cu[n] - f[n] * u[n]));
        div_sup = std::max(div_sup, std::abs(du[n]));
        dot_sup = std::max(dot_sup, std::abs(dot(u[n], gf[n])));
    });
    for (int c = 0; c < 3; ++c) {
        VectorField gc = gradient(u.component(c));
        grad_u_sup = std::max(grad_u_sup, sup_norm(gc));
    }
    VerifyReport rep;
    rep.curl_res = curl_sup / std::max(u_sup, eps);
    rep.div_res = div_sup / std::max(grad_u_sup, eps);
    rep.ortho_res = dot_sup / std::max(u_sup * gf_sup, eps);
    return rep;
}

struct NewtonOptions {
    std::size_t max_iter = 50;
    double tol = 1e-10;
    double damping_floor = 1.0 / 1024.0;  // 2^-10
};

// A converged flux-function solve: H on a planar grid together with the
// symbolic profile Phi and its exact derivative.
struct FluxSolve {
    ScalarField H;
    Expr Phi, PhiPrime;
    std::vector<double> residual_history;  // sup-norm residual after each Newton step
    std::size_t iterations = 0;

    FluxSolve(const Grid& g, Expr phi, Expr phi_prime)
        : H(g), Phi(std::move(phi)), PhiPrime(std::move(phi_prime)) {}
};

namespace detail {

// Semilinear Dirichlet problem L H = -w(p) N(H) on the used-axes plane of a
// grid with one collapsed axis, where L is a 5-point second-order operator
// with node-dependent flux weights and N is a pointwise nonlinearity.
// Solved by damped Newton with a sparse LU factorization per step.
struct PlanarProblem {
    const Grid& grid;
    int a0, a1;  // the two used axes
    // flux weight between a node and its neighbor (midpoint value), per axis,
    // indexed by the smaller node's coordinate along that axis
    std::function<double(int axis, std::size_t lower, std::size_t i0, std::size_t i1)> flux;
    std::function<double(std::size_t i0, std::size_t i1)> weight;  // w(p) multiplying N
};

inline ScalarField newton_flux_solve(const PlanarProblem& pb, const ScalarField& bc,
                                     const Expr& nonlin, const Expr& nonlin_prime,
                                     const NewtonOptions& newton,
                                     std::vector<double>& history) {
    const Grid& gr = pb.grid;
    const std::size_t n0 = gr.dims[pb.a0], n1 = gr.dims[pb.a1];
    const double h0 = gr.spacing[pb.a0], h1 = gr.spacing[pb.a1];

    auto node = [&](std::size_t i0, std::size_t i1) {
        std::size_t c[3] = {0, 0, 0};
        c[pb.a0] = i0;
        c[pb.a1] = i1;
        return gr.index(c[0], c[1], c[2]);
    };
    // unknown numbering over interior nodes
    std::vector<long> unknown(gr.size(), -1);
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    for (std::size_t i1 = 1; i1 + 1 < n1; ++i1)
        for (std::size_t i0 = 1; i0 + 1 < n0; ++i0) {
            unknown[node(i0, i1)] = static_cast<long>(coords.size());
            coords.emplace_back(i0, i1);
        }
    const std::size_t nun = coords.size();

    ScalarField H = bc;
    auto eval_nl = [&](const Expr& e, double t) { return evaluate(e, Bindings{}.set(Var::t, t)); };

    auto linear_part = [&](const ScalarField& field, std::size_t i0, std::size_t i1) {
        double c = field[node(i0, i1)];
        double fe = pb.flux(0, i0, i0, i1), fw = pb.flux(0, i0 - 1, i0, i1);
        double fn = pb.flux(1, i1, i0, i1), fs = pb.flux(1, i1 - 1, i0, i1);
        return (fe * (field[node(i0 + 1, i1)] - c) - fw * (c - field[node(i0 - 1, i1)])) /
                   (h0 * h0) +
               (fn * (field[node(i0, i1 + 1)] - c) - fs * (c - field[node(i0, i1 - 1)])) /
                   (h1 * h1);
    };
    auto residual_at = [&](const ScalarField& field, std::size_t i0, std::size_t i1) {
        return linear_part(field, i0, i1) +
               pb.weight(i0, i1) * eval_nl(nonlin, field[node(i0, i1)]);
    };
    auto sup_residual = [&](const ScalarField& field) {
        double s = 0.0;
        for (std::size_t m = 0; m < nun; ++m)
            s = std::max(s, std::abs(residual_at(field, coords[m].first, coords[m].second)));
        return s;
    };

    // Initial guess: the harmonic extension of the boundary data (one linear
    // solve with the nonlinearity switched off).
    using Trip = Eigen::Triplet<double>;
    auto assemble = [&](const ScalarField& field, bool with_nonlin, Eigen::VectorXd& rhs,
                        std::vector<Trip>& trips) {
        rhs.setZero(static_cast<long>(nun));
        trips.clear();
        trips.reserve(5 * nun);
        for (std::size_t m = 0; m < nun; ++m) {
            auto [i0, i1] = coords[m];
            double fe = pb.flux(0, i0, i0, i1), fw = pb.flux(0, i0 - 1, i0, i1);
            double fn = pb.flux(1, i1, i0, i1), fs = pb.flux(1, i1 - 1, i0, i1);
            double diag = -(fe + fw) / (h0 * h0) - (fn + fs) / (h1 * h1);
            if (with_nonlin)
                diag += pb.weight(i0, i1) * eval_nl(nonlin_prime, field[node(i0, i1)]);
            long row = static_cast<long>(m);
            trips.emplace_back(row, row, diag);
            auto couple = [&](std::size_t j0, std::size_t j1, double coeff) {
                long col = unknown[node(j0, j1)];
                if (col >= 0)
                    trips.emplace_back(row, col, coeff);
                else
                    rhs[row] -= coeff * field[node(j0, j1)];
            };
            couple(i0 + 1, i1, fe / (h0 * h0));
            couple(i0 - 1, i1, fw / (h0 * h0));
            couple(i0, i1 + 1, fn / (h1 * h1));
            couple(i0, i1 - 1, fs / (h1 * h1));
        }
    };

    Eigen::SparseMatrix<double> mat(static_cast<long>(nun), static_cast<long>(nun));
    Eigen::VectorXd rhs;
    std::vector<Trip> trips;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;

    // harmonic initial guess: L H = 0, boundary values kept
    assemble(H, false, rhs, trips);
    mat.setFromTriplets(trips.begin(), trips.end());
    lu.compute(mat);
    if (lu.info() != Eigen::Success)
        throw NewtonDiverged("flux solve: singular linear operator");
    Eigen::VectorXd sol = lu.solve(rhs);
    for (std::size_t m = 0; m < nun; ++m)
        H[node(coords[m].first, coords[m].second)] = sol[static_cast<long>(m)];

    history.clear();
    double res = sup_residual(H);
    history.push_back(res);
    for (std::size_t iter = 0; iter < newton.max_iter && res > newton.tol; ++iter) {
        // Newton step: (L + w N'(H)) delta = -(L H + w N(H)) at interior nodes
        assemble(H, true, rhs, trips);
        for (std::size_t m = 0; m < nun; ++m)
            rhs[static_cast<long>(m)] = -residual_at(H, coords[m].first, coords[m].second);
        mat.setFromTriplets(trips.begin(), trips.end());
        lu.compute(mat);
        if (lu.info() != Eigen::Success)
            throw NewtonDiverged("flux solve: Jacobian factorization failed");
        Eigen::VectorXd delta = lu.solve(rhs);

        double lambda = 1.0;
        ScalarField trial = H;
        double trial_res = res;
        while (true) {
            for (std::size_t m = 0; m < nun; ++m) {
                std::size_t n = node(coords[m].first, coords[m].second);
                trial[n] = H[n] + lambda * delta[static_cast<long>(m)];
            }
            trial_res = sup_residual(trial);
            if (std::isfinite(trial_res) && trial_res < res) break;
            lambda *= 0.5;
            if (lambda < newton.damping_floor)
                throw NewtonDiverged("flux solve: damping floor reached without decrease");
        }
        H = std::move(trial);
        res = trial_res;
        history.push_back(res);
    }
    if (res > newton.tol)
        throw NewtonDiverged("flux solve: residual " + std::to_string(res) +
                             " after max iterations");
    return H;
}

}  // namespace detail

// Solves Lap H = -(Phi' Phi)(H) on a Cartesian (x, y) plane (z collapsed)
// with Dirichlet data taken from the boundary nodes of bc.
inline FluxSolve solve_translation(const Expr& Phi, const ScalarField& bc,
                                   const NewtonOptions& newton = {}) {
    const Grid& gr = bc.grid;
    if (gr.coords != CoordinateSystem::Cartesian || gr.axis_used(2) || !gr.axis_used(0) ||
        !gr.axis_used(1))
        throw DomainError("solve_translation: need a Cartesian (x, y) plane with nz = 1");
    if (!bc.finite()) throw NonFiniteInput("solve_translation: boundary data not finite");

    Expr PhiPrime = differentiate(Phi, Var::t);
    Expr nonlin = make_bin(BinOp::mul, PhiPrime, Phi);
    Expr nonlin_prime = differentiate(nonlin, Var::t);

    detail::PlanarProblem pb{gr, 0, 1,
                             [](int, std::size_t, std::size_t, std::size_t) { return 1.0; },
                             [](std::size_t, std::size_t) { return 1.0; }};
    FluxSolve fs(gr, Phi, PhiPrime);
    fs.H = detail::newton_flux_solve(pb, bc, nonlin, nonlin_prime, newton, fs.residual_history);
    fs.iterations = fs.residual_history.empty() ? 0 : fs.residual_history.size() - 1;
    return fs;
}

// Solves d/dr((1/r) dH/dr) + d/dz((1/r) dH/dz) = -(1/r)(Phi' Phi)(H) on an
// (r, z) half-plane section (theta collapsed), conservative fluxes with
// midpoint 1/r weights.
inline FluxSolve solve_rotation(const Expr& Phi, const ScalarField& bc,
                                const NewtonOptions& newton = {}) {
    const Grid& gr = bc.grid;
    if (gr.coords != CoordinateSystem::CylindricalRZ || gr.axis_used(1) || !gr.axis_used(0) ||
        !gr.axis_used(2))
        throw DomainError("solve_rotation: need an (r, z) plane with the angular axis collapsed");
    if (!bc.finite()) throw NonFiniteInput("solve_rotation: boundary data not finite");

    Expr PhiPrime = differentiate(Phi, Var::t);
    Expr nonlin = make_bin(BinOp::mul, PhiPrime, Phi);
    Expr nonlin_prime = differentiate(nonlin, Var::t);

    auto r_at = [&gr](double idx) { return gr.origin.x + idx * gr.spacing[0]; };
    detail::PlanarProblem pb{
        gr, 0, 2,
        [r_at](int axis, std::size_t lower, std::size_t i0, std::size_t) {
            // axis 0 walks in r (midpoint between nodes lower and lower+1),
            // axis 1 walks in z at fixed r
            return axis == 0 ? 1.0 / r_at(double(lower) + 0.5) : 1.0 / r_at(double(i0));
        },
        [r_at](std::size_t i0, std::size_t) { return 1.0 / r_at(double(i0)); }};
    FluxSolve fs(gr, Phi, PhiPrime);
    fs.H = detail::newton_flux_solve(pb, bc, nonlin, nonlin_prime, newton, fs.residual_history);
    fs.iterations = fs.residual_history.empty() ? 0 : fs.residual_history.size() - 1;
    return fs;
}

// u = (H_y, -H_x, Phi(H)), f = Phi'(H); constant in z by construction (the
// collapsed axis makes z-derivatives identically zero downstream). The
// orientation of the planar part is fixed by the right-handed curl:
//   curl u = (Phi' H_y, -Phi' H_x, -Lap H) = f u
// exactly when Lap H = -(Phi' Phi)(H).
inline std::pair<VectorField, ScalarField> assemble_translation(const FluxSolve& fs) {
    const Grid& gr = fs.H.grid;
    ScalarField Hx = detail::coordinate_derivative(fs.H, 0);
    ScalarField Hy = detail::coordinate_derivative(fs.H, 1);
    VectorField u(gr);
    ScalarField f(gr);
    for (std::size_t n = 0; n < gr.size(); ++n) {
        double phi = evaluate(fs.Phi, Bindings{}.set(Var::t, fs.H[n]));
        u[n] = {Hy[n], -Hx[n], phi};
        f[n] = evaluate(fs.PhiPrime, Bindings{}.set(Var::t, fs.H[n]));
    }
    return {std::move(u), std::move(f)};
}

// u = (-(1/r) H_z) rhat + ((1/r) Phi(H)) thetahat + ((1/r) H_r) zhat in
// physical (orthonormal) cylindrical components; f = Phi'(H). Axisymmetric.
inline std::pair<VectorField, ScalarField> assemble_rotation(const FluxSolve& fs) {
    const Grid& gr = fs.H.grid;
    ScalarField Hr = detail::coordinate_derivative(fs.H, 0);
    ScalarField Hz = detail::coordinate_derivative(fs.H, 2);
    VectorField u(gr);
    ScalarField f(gr);
    for (std::size_t k = 0; k < gr.dims[2]; ++k)
        for (std::size_t j = 0; j < gr.dims[1]; ++j)
            for (std::size_t i = 0; i < gr.dims[0]; ++i) {
                std::size_t n = gr.index(i, j, k);
                double r = gr.origin.x + double(i) * gr.spacing[0];
                double phi = evaluate(fs.Phi, Bindings{}.set(Var::t, fs.H[n]));
                u[n] = {-Hz[n] / r, phi / r, Hr[n] / r};
                f[n] = evaluate(fs.PhiPrime, Bindings{}.set(Var::t, fs.H[n]));
            }
    return {std::move(u), std::move(f)};
}

}  // namespace beltrami
