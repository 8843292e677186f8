#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "beltrami/bessel.hpp"
#include "beltrami/frame_pde.hpp"
#include "beltrami/ops.hpp"

using namespace beltrami;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("frame system is equivalent to curl u = f u, div u = 0") {
    // For tangential u = u1 e1 + u2 e2 the pointwise identity
    //   curl u - f u = -R4 e1 + R3 e2 + R1 e3,   div u = R2
    // couples the residuals to the classical operators; both sides are
    // independent second-order discretizations of the same quantities.
    Grid g({0.1, 0.2, 0.3}, {1.0 / 32, 1.0 / 32, 1.0 / 32}, {33, 33, 33});
    ScalarField f = sample(g, std::function<double(Vec3)>([](Vec3 p) {
                               return p.z + 0.3 * std::sin(p.x) * std::cos(p.y);
                           }));
    AdaptedFrame fr = adapted_frame(f);
    FrameInvariants inv = frame_invariants(f, fr);

    TangentialField tf{ScalarField(g), ScalarField(g)};
    for (std::size_t k = 0; k < 33; ++k)
        for (std::size_t j = 0; j < 33; ++j)
            for (std::size_t i = 0; i < 33; ++i) {
                Vec3 p = g.node(i, j, k);
                std::size_t n = g.index(i, j, k);
                tf.u1[n] = std::cos(p.y) + 0.5 * p.x;
                tf.u2[n] = std::sin(p.x + p.z);
            }

    SystemResidual res = system_residual(tf, inv, fr, f);
    VectorField u = tf.reconstruct(fr);
    VectorField cu = curl(u);
    double worst = 0.0;
    for_interior(g, 2, [&](std::size_t n) {
        Vec3 lhs = cu[n] - f[n] * u[n];
        Vec3 rhs = -res.r4[n] * fr.e1[n] + res.r3[n] * fr.e2[n] + res.r1[n] * fr.e3[n];
        worst = std::max(worst, norm(lhs - rhs));
    });
    CHECK(worst <= 5e-2);

    ScalarField du = divergence(u);
    double dworst = 0.0;
    for_interior(g, 2, [&](std::size_t n) {
        dworst = std::max(dworst, std::abs(du[n] - res.r2[n]));
    });
    CHECK(dworst <= 5e-2);
}

TEST_CASE("cylinder ODE solutions are linear in the initial data") {
    Expr phi = parse("1/r");
    auto sa = cylinder_ode_solve(phi, 0.5, 1.0, 0.0, 1.5, 1e-3);
    auto sb = cylinder_ode_solve(phi, 0.5, 0.0, 1.0, 1.5, 1e-3);
    double a = 0.37, b = -2.25;
    auto sc = cylinder_ode_solve(phi, 0.5, a * 1.0 + b * 0.0, a * 0.0 + b * 1.0, 1.5, 1e-3);
    REQUIRE(sa.size() == sc.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sc.size(); ++i) {
        worst = std::max(worst, std::abs(sc[i].u1 - (a * sa[i].u1 + b * sb[i].u1)));
        worst = std::max(worst, std::abs(sc[i].u2 - (a * sa[i].u2 + b * sb[i].u2)));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("constant factor reproduces the Bessel pair") {
    const double c = 2.0, r0 = 0.5, r1 = 2.5;
    auto sol = cylinder_ode_solve(parse("2"), r0, bessel_j1(c * r0), bessel_j0(c * r0), r1, 1e-4);
    double worst = 0.0;
    for (const auto& s : sol) {
        worst = std::max(worst, std::abs(s.u1 - bessel_j1(c * s.r)));
        worst = std::max(worst, std::abs(s.u2 - bessel_j0(c * s.r)));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("cylinder ODE rejects non-positive radii and steps") {
    CHECK_THROWS_AS(cylinder_ode_solve(parse("1"), -0.5, 1.0, 0.0, 1.5, 1e-3), DomainError);
    CHECK_THROWS_AS(cylinder_ode_solve(parse("1"), 0.5, 1.0, 0.0, 1.5, 0.0), DomainError);
}

namespace {

struct ThetaGeometry {
    Grid g;
    ScalarField f;
    AdaptedFrame fr;
    FrameInvariants inv;
    ThetaGeometry()
        : g({1.0, 0.2, 0.0}, {1.0 / 32, 1.0 / 32, 1.0 / 32}, {33, 33, 33},
            CoordinateSystem::CylindricalRZ),
          f(sample(g, std::function<double(Vec3)>([](Vec3 p) { return p.y; }))) {
        fr = adapted_frame(f);
        inv = frame_invariants(f, fr);
    }
};

// Project an analytic vector field onto the computed tangent frame so the
// test is independent of the gauge adapted_frame happens to pick.
TangentialField project(const VectorField& U, const AdaptedFrame& fr) {
    TangentialField tf{ScalarField(U.grid), ScalarField(U.grid)};
    for (std::size_t n = 0; n < U.values.size(); ++n) {
        tf.u1[n] = dot(U[n], fr.e1[n]);
        tf.u2[n] = dot(U[n], fr.e2[n]);
    }
    return tf;
}

}  // namespace

TEST_CASE("angular geometry amplifies the tangential residual") {
    ThetaGeometry geo;
    // U = a z-hat + (b/r) r-hat satisfies the tangential constraints exactly
    // in the continuum, so it clears the compatibility precondition.
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> coef(0.3, 1.2);
    for (int trial = 0; trial < 3; ++trial) {
        double a = coef(rng), b = coef(rng);
        VectorField U(geo.g);
        for (std::size_t k = 0; k < 33; ++k)
            for (std::size_t j = 0; j < 33; ++j)
                for (std::size_t i = 0; i < 33; ++i) {
                    double r = 1.0 + double(i) / 32.0;
                    U.at(i, j, k) = {b / r, 0.0, a};
                }
        TangentialField tf = project(U, geo.fr);
        EvolveResult ev = evolve_level_surfaces(tf, geo.inv, geo.fr, geo.f, 0, 0.8, 0.02);
        INFO("trial " << trial << ": initial " << ev.initial_residual << " max "
                      << ev.max_residual);
        CHECK(ev.amplification >= 10.0);
    }
}

TEST_CASE("angular geometry rejects incompatible initial data") {
    ThetaGeometry geo;
    TangentialField tf{ScalarField(geo.g), ScalarField(geo.g)};
    for (std::size_t n = 0; n < geo.g.size(); ++n) {
        tf.u1[n] = 1.0;
        tf.u2[n] = double(n % 7);  // wildly non-smooth
    }
    CHECK_THROWS_AS(evolve_level_surfaces(tf, geo.inv, geo.fr, geo.f, 0, 0.8, 0.02),
                    IncompatibleInitialData);
}

TEST_CASE("parallel planes keep the tangential residual at truncation level") {
    Grid g({0.1, 0.2, 0.3}, {1.0 / 32, 1.0 / 32, 1.0 / 32}, {33, 33, 33});
    ScalarField f = sample(g, std::function<double(Vec3)>([](Vec3 p) { return p.z; }));
    AdaptedFrame fr = adapted_frame(f);
    FrameInvariants inv = frame_invariants(f, fr);

    VectorField U(g);
    for (std::size_t k = 0; k < 33; ++k)
        for (std::size_t j = 0; j < 33; ++j)
            for (std::size_t i = 0; i < 33; ++i) {
                Vec3 p = g.node(i, j, k);
                U.at(i, j, k) = {p.x, -p.y, 0.0};  // harmonic planar data
            }
    TangentialField tf{ScalarField(g), ScalarField(g)};
    for (std::size_t n = 0; n < g.size(); ++n) {
        tf.u1[n] = dot(U[n], fr.e1[n]);
        tf.u2[n] = dot(U[n], fr.e2[n]);
    }
    EvolveResult ev = evolve_level_surfaces(tf, inv, fr, f, 0, 0.8, 0.02);
    const double tol = 20.0 / (32.0 * 32.0);
    CHECK(ev.max_residual <= tol);
}

TEST_CASE("misaligned normals are rejected") {
    Grid g({0.1, 0.2, 0.3}, {1.0 / 16, 1.0 / 16, 1.0 / 16}, {17, 17, 17});
    ScalarField f = sample(g, std::function<double(Vec3)>(
                                  [](Vec3 p) { return p.z + 0.5 * p.x; }));
    AdaptedFrame fr = adapted_frame(f);
    FrameInvariants inv = frame_invariants(f, fr);
    TangentialField tf{ScalarField(g), ScalarField(g)};
    CHECK_THROWS_AS(evolve_level_surfaces(tf, inv, fr, f, 0, 0.5, 0.02), StepOutOfDomain);
}
