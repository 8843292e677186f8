#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "beltrami/cauchy.hpp"

using namespace beltrami;

namespace {

const double kPi = std::acos(-1.0);

// Analytic test family with a sign-changing factor and |u3| bounded away
// from zero: rotate the holomorphic pair
//   w + i v = 1 + 0.3 exp(i (y + i z))
// by the cumulative angle Phi(x) = 0.4 sin(x); then
//   u = (0, v cos Phi + w sin Phi, -v sin Phi + w cos Phi),  f = 0.4 cos(x)
// satisfies curl u = f u, div u = 0 with u3 >= 0.6 on the marched block.
struct Analytic {
    static double Phi(double x) { return 0.4 * std::sin(x); }
    static double f(double x) { return 0.4 * std::cos(x); }
    static double v(double y, double z) { return 0.3 * std::exp(-z) * std::sin(y); }
    static double w(double y, double z) { return 1.0 + 0.3 * std::exp(-z) * std::cos(y); }
    static Vec3 u(double x, double y, double z) {
        double c = std::cos(Phi(x)), s = std::sin(Phi(x));
        double vv = v(y, z), ww = w(y, z);
        return {0.0, vv * c + ww * s, -vv * s + ww * c};
    }
};

CauchySlice analytic_slice(std::size_t n, double z0) {
    return CauchySlice::sample(n, n, 2 * kPi / double(n), 2 * kPi / double(n), 0.0, 0.0, z0,
                               [&](double x, double y) { return Analytic::u(x, y, z0); });
}

}  // namespace

TEST_CASE("marching reproduces the analytic continuation") {
    CauchySlice s0 = analytic_slice(64, 0.0);
    VectorField u = march(s0, 0.2, 32);
    REQUIRE(u.grid.dims[2] == 33);
    double err = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < 33; ++k)
        for (std::size_t j = 0; j < 64; ++j)
            for (std::size_t i = 0; i < 64; ++i) {
                Vec3 p = u.grid.node(i, j, k);
                Vec3 exact = Analytic::u(p.x, p.y, p.z);
                err = std::max(err, norm(u.at(i, j, k) - exact));
                scale = std::max(scale, norm(exact));
            }
    CHECK(err / scale <= 1e-6);
}

TEST_CASE("recover_f returns the proportionality factor of the marched block") {
    CauchySlice s0 = analytic_slice(64, 0.0);
    VectorField u = march(s0, 0.2, 32);
    ScalarField f = recover_f(u, 1e-6, SliceDerivative::Spectral);
    double err = 0.0;
    for (std::size_t k = 0; k < 33; ++k)
        for (std::size_t j = 0; j < 64; ++j)
            for (std::size_t i = 0; i < 64; ++i) {
                Vec3 p = u.grid.node(i, j, k);
                err = std::max(err, std::abs(f.values[u.grid.index(i, j, k)] - Analytic::f(p.x)));
            }
    CHECK(err / 0.4 <= 1e-3);

    MarchResidual res = march_residual(u, f);
    CHECK(res.curl_res <= 1e-3);
    CHECK(res.div_res <= 1e-3);
}

TEST_CASE("recover_f works on directly sampled fields with both derivative kinds") {
    Grid g({0.0, 0.0, 0.0}, {2 * kPi / 64, 2 * kPi / 64, 0.2 / 16}, {64, 64, 17});
    VectorField u(g);
    for (std::size_t k = 0; k < 17; ++k)
        for (std::size_t j = 0; j < 64; ++j)
            for (std::size_t i = 0; i < 64; ++i) {
                Vec3 p = g.node(i, j, k);
                u.at(i, j, k) = Analytic::u(p.x, p.y, p.z);
            }
    ScalarField fs = recover_f(u, 1e-6, SliceDerivative::Spectral);
    ScalarField fd = recover_f(u, 1e-6, SliceDerivative::FiniteDifference);
    double es = 0.0, ed = 0.0;
    for (std::size_t k = 0; k < 17; ++k)
        for (std::size_t j = 0; j < 64; ++j)
            for (std::size_t i = 0; i < 64; ++i) {
                std::size_t n = g.index(i, j, k);
                double exact = Analytic::f(g.node(i, j, k).x);
                es = std::max(es, std::abs(fs[n] - exact));
                ed = std::max(ed, std::abs(fd[n] - exact));
            }
    CHECK(es <= 1e-10);   // periodic and band-limited: spectral is exact
    CHECK(ed <= 5e-3);    // second-order stencils at h = 2 pi / 64
}

TEST_CASE("a constant vertical slice marches to the constant field") {
    CauchySlice s0 = CauchySlice::sample(16, 16, 0.1, 0.1, 0.0, 0.0, 0.0,
                                         [](double, double) { return Vec3{0.0, 0.0, 1.0}; });
    VectorField u = march(s0, 0.5, 8);
    for (const Vec3& val : u.values) {
        REQUIRE(std::abs(val.x) <= 1e-13);
        REQUIRE(std::abs(val.y) <= 1e-13);
        REQUIRE(std::abs(val.z - 1.0) <= 1e-13);
    }
    ScalarField f = recover_f(u);
    CHECK(sup_norm(f) <= 1e-12);
}

TEST_CASE("a vanishing normal component stops the march") {
    CauchySlice s0 = CauchySlice::sample(32, 32, 2 * kPi / 32, 2 * kPi / 32, 0.0, 0.0, 0.0,
                                         [](double x, double) {
                                             return Vec3{1.0, 0.0, std::sin(x)};
                                         });
    CHECK_THROWS_AS(march(s0, 0.2, 8), U3Vanished);
}

TEST_CASE("recover_f guards against small u3") {
    Grid g({0, 0, 0}, {0.1, 0.1, 0.1}, {8, 8, 8});
    VectorField u(g);
    for (Vec3& val : u.values) val = {1.0, 0.0, 0.0};
    CHECK_THROWS_AS(recover_f(u), U3Vanished);
}

TEST_CASE("noise amplified beyond the blow-up guard aborts") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    CauchySlice s0 = CauchySlice::sample(64, 64, 2 * kPi / 64, 2 * kPi / 64, 0.0, 0.0, 0.0,
                                         [&](double, double) {
                                             return Vec3{noise(rng), noise(rng), 1.0 + noise(rng)};
                                         });
    CHECK_THROWS_AS(march(s0, 4.0, 256), BlowUp);
}

TEST_CASE("march validates slice size and step count") {
    CauchySlice tiny = CauchySlice::sample(4, 4, 0.1, 0.1, 0.0, 0.0, 0.0,
                                           [](double, double) { return Vec3{0, 0, 1}; });
    CHECK_THROWS_AS(march(tiny, 0.1, 8), Error);
    CauchySlice ok = CauchySlice::sample(8, 8, 0.1, 0.1, 0.0, 0.0, 0.0,
                                         [](double, double) { return Vec3{0, 0, 1}; });
    CHECK_THROWS_AS(march(ok, 0.1, 2), Error);
}
