#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "beltrami/bessel.hpp"
#include "beltrami/reference_fields.hpp"
#include "beltrami/symmetric.hpp"

using namespace beltrami;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("harmonic gradient: curl-free with f identically zero") {
    OracleSpec spec;
    spec.grid = Grid({0.1, 0.2, 0.3}, {1.0 / 16, 1.0 / 16, 1.0 / 16}, {17, 17, 17});
    spec.kind = HarmonicGradientSpec{parse("x^2 - y^2")};
    auto [u, f] = materialize(spec);
    CHECK(sup_norm(f) == 0.0);
    double err = 0.0;
    for (std::size_t k = 0; k < 17; ++k)
        for (std::size_t j = 0; j < 17; ++j)
            for (std::size_t i = 0; i < 17; ++i) {
                Vec3 p = spec.grid.node(i, j, k);
                err = std::max(err, norm(u.at(i, j, k) - Vec3{2 * p.x, -2 * p.y, 0.0}));
            }
    CHECK(err <= 1e-12);
    VerifyReport r = verify_beltrami(u, f);
    CHECK(r.curl_res <= 1e-10);
    CHECK(r.div_res <= 1e-10);
}

TEST_CASE("ABC flow verifies at truncation order") {
    OracleSpec spec;
    spec.grid = Grid({0.0, 0.0, 0.0}, {2 * kPi / 32, 2 * kPi / 32, 2 * kPi / 32}, {33, 33, 33});
    spec.kind = ABCSpec{1.0, 1.0, 0.5, 1.0};
    auto [u, f] = materialize(spec);
    for (double v : f.values) REQUIRE(v == 1.0);
    VerifyReport r = verify_beltrami(u, f);
    const double h = 2 * kPi / 32;
    CHECK(r.curl_res <= 20 * h * h);
    CHECK(r.div_res <= 20 * h * h);
}

TEST_CASE("planar Cauchy-Riemann family verifies and rejects non-CR pairs") {
    OracleSpec spec;
    spec.grid = Grid({0.1, 0.2, 0.3}, {1.0 / 32, 1.0 / 32, 1.0 / 32}, {33, 33, 33});
    // w + i v = i (x + i y) is holomorphic
    spec.kind = PlanarCRSpec{parse("1"), parse("x"), parse("0 - y")};
    auto [u, f] = materialize(spec);
    for (double v : f.values) REQUIRE(v == Catch::Approx(1.0).margin(1e-14));
    VerifyReport r = verify_beltrami(u, f);
    const double h = 1.0 / 32;
    CHECK(r.curl_res <= 20 * h * h);
    CHECK(r.div_res <= 20 * h * h);
    CHECK(r.ortho_res <= 20 * h * h);

    OracleSpec bad = spec;
    bad.kind = PlanarCRSpec{parse("1"), parse("x"), parse("x")};
    CHECK_THROWS_AS(materialize(bad), CRViolation);
}

TEST_CASE("cylinder ODE family with constant factor matches Lundquist") {
    Grid g({0.5, 0.0, 0.0}, {1.0 / 32, 2 * kPi / 64, 1.0 / 32}, {33, 65, 33},
           CoordinateSystem::CylindricalRZ);
    const double c = 2.0;
    OracleSpec ode_spec;
    ode_spec.grid = g;
    ode_spec.kind = CylinderSpec{parse("2"), bessel_j1(c * 0.5), bessel_j0(c * 0.5), 0.5};
    auto [u_ode, f_ode] = materialize(ode_spec);

    OracleSpec lund_spec;
    lund_spec.grid = g;
    lund_spec.kind = LundquistSpec{c};
    auto [u_l, f_l] = materialize(lund_spec);

    double err = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) err = std::max(err, norm(u_ode[n] - u_l[n]));
    CHECK(err <= 1e-8);
    for (std::size_t n = 0; n < g.size(); ++n) REQUIRE(f_l[n] == c);

    VerifyReport r = verify_beltrami(u_l, f_l);
    const double h = 2 * kPi / 64;  // the coarsest arc spacing dominates
    CHECK(r.curl_res <= 20 * h * h);
    CHECK(r.div_res <= 20 * h * h);
}
