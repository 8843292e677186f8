#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "beltrami/errors.hpp"

namespace beltrami {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

enum class CoordinateSystem {
    Cartesian,      // axes (x, y, z)
    CylindricalRZ,  // axes (r, theta, z); vector components in the orthonormal
                    // frame (r-hat, theta-hat, z-hat); the axis r = 0 is excluded
};

// Uniform structured grid. An axis with dims == 1 is unused (2D problems);
// used axes need at least 5 nodes so the second-order one-sided boundary
// stencils never reach across the whole axis.
struct Grid {
    Vec3 origin{};
    Vec3 spacing{1.0, 1.0, 1.0};
    std::array<std::size_t, 3> dims{1, 1, 1};
    CoordinateSystem coords = CoordinateSystem::Cartesian;

    Grid() = default;
    Grid(Vec3 org, Vec3 h, std::array<std::size_t, 3> n,
         CoordinateSystem cs = CoordinateSystem::Cartesian)
        : origin(org), spacing(h), dims(n), coords(cs) {
        validate();
    }

    void validate() const {
        for (int a = 0; a < 3; ++a) {
            if (!(spacing[a] > 0.0))
                throw Error("Grid: spacing must be strictly positive");
            if (dims[a] != 1 && dims[a] < 5)
                throw Error("Grid: used axes need at least 5 nodes");
        }
        if (coords == CoordinateSystem::CylindricalRZ && !(origin.x > 0.0))
            throw Error("Grid: cylindrical grids must exclude the axis (r-origin > 0)");
    }

    std::size_t size() const { return dims[0] * dims[1] * dims[2]; }
    bool axis_used(int a) const { return dims[a] > 1; }

    // Row-major with x fastest, matching the BFG1 node order.
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
        return i + dims[0] * (j + dims[1] * k);
    }

    Vec3 node(std::size_t i, std::size_t j, std::size_t k) const {
        return {origin.x + spacing.x * static_cast<double>(i),
                origin.y + spacing.y * static_cast<double>(j),
                origin.z + spacing.z * static_cast<double>(k)};
    }

    // Physical arc length per unit coordinate along axis a at a node.
    // Only the theta axis of a cylindrical grid differs from 1.
    double metric_scale(int a, std::size_t i) const {
        if (coords == CoordinateSystem::CylindricalRZ && a == 1)
            return origin.x + spacing.x * static_cast<double>(i);
        (void)a;
        return 1.0;
    }

    bool same_layout(const Grid& o) const {
        return dims == o.dims && coords == o.coords &&
               origin.x == o.origin.x && origin.y == o.origin.y && origin.z == o.origin.z &&
               spacing.x == o.spacing.x && spacing.y == o.spacing.y && spacing.z == o.spacing.z;
    }
};

}  // namespace beltrami
