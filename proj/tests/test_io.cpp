#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "beltrami/fields.hpp"
#include "beltrami/io.hpp"

using namespace beltrami;

namespace {
std::filesystem::path tmpdir() {
    auto p = std::filesystem::temp_directory_path() / "beltrami_io_test";
    std::filesystem::create_directories(p);
    return p;
}
}  // namespace

TEST_CASE("BFG1 scalar round-trip is bit exact") {
    Grid g({0.1, -0.2, 0.3}, {0.25, 0.5, 0.125}, {5, 6, 7});
    ScalarField f(g);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dist(-1e3, 1e3);
    for (double& v : f.values) v = dist(rng);
    f[17] = 1.0 / 3.0;
    f[18] = 1e-300;

    auto path = (tmpdir() / "scalar.bfg1").string();
    write_bfg1_file(path, f);
    ScalarField back = read_bfg1_scalar(path);
    REQUIRE(back.grid.same_layout(g));
    for (std::size_t n = 0; n < g.size(); ++n) REQUIRE(back[n] == f[n]);
}

TEST_CASE("BFG1 vector round-trip preserves grid metadata") {
    Grid g({0.5, 0.0, -1.0}, {0.1, 0.7, 0.2}, {6, 1, 5}, CoordinateSystem::CylindricalRZ);
    VectorField u(g);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (Vec3& v : u.values) v = {dist(rng), dist(rng), dist(rng)};

    auto path = (tmpdir() / "vector.bfg1").string();
    write_bfg1_file(path, u);
    VectorField back = read_bfg1_vector(path);
    REQUIRE(back.grid.same_layout(g));
    REQUIRE(back.grid.coords == CoordinateSystem::CylindricalRZ);
    for (std::size_t n = 0; n < g.size(); ++n) {
        REQUIRE(back[n].x == u[n].x);
        REQUIRE(back[n].y == u[n].y);
        REQUIRE(back[n].z == u[n].z);
    }
}

TEST_CASE("kind mismatch and malformed headers are errors") {
    Grid g({0, 0, 0}, {1, 1, 1}, {5, 5, 5});
    ScalarField f(g);
    auto path = (tmpdir() / "kind.bfg1").string();
    write_bfg1_file(path, f);
    CHECK_THROWS_AS(read_bfg1_vector(path), Error);

    std::istringstream bad("not-bfg1\n");
    CHECK_THROWS_AS(read_bfg1(bad), Error);

    std::istringstream truncated("bfg1\ncoords cartesian\norigin 0 0 0\n");
    CHECK_THROWS_AS(read_bfg1(truncated), Error);
}

TEST_CASE("VTK export writes a legacy structured-points dataset") {
    Grid g({0, 0, 0}, {0.5, 0.5, 0.5}, {5, 5, 5});
    VectorField u(g);
    for (Vec3& v : u.values) v = {1.0, 2.0, 3.0};
    auto path = (tmpdir() / "u.vtk").string();
    write_vtk_file(path, u, "u");

    std::ifstream is(path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    CHECK(text.find("# vtk DataFile Version") != std::string::npos);
    CHECK(text.find("DATASET STRUCTURED_POINTS") != std::string::npos);
    CHECK(text.find("DIMENSIONS 5 5 5") != std::string::npos);
    CHECK(text.find("VECTORS u double") != std::string::npos);
}
