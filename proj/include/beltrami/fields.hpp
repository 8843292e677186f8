#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "beltrami/grid.hpp"
#include "beltrami/parallel.hpp"

namespace beltrami {

struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid(g), values(g.size(), 0.0) {}

    double& operator[](std::size_t n) { return values[n]; }
    double operator[](std::size_t n) const { return values[n]; }
    double& at(std::size_t i, std::size_t j, std::size_t k) { return values[grid.index(i, j, k)]; }
    double at(std::size_t i, std::size_t j, std::size_t k) const { return values[grid.index(i, j, k)]; }

    bool finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

struct VectorField {
    Grid grid;
    std::vector<Vec3> values;

    VectorField() = default;
    explicit VectorField(const Grid& g) : grid(g), values(g.size()) {}

    Vec3& operator[](std::size_t n) { return values[n]; }
    const Vec3& operator[](std::size_t n) const { return values[n]; }
    Vec3& at(std::size_t i, std::size_t j, std::size_t k) { return values[grid.index(i, j, k)]; }
    const Vec3& at(std::size_t i, std::size_t j, std::size_t k) const { return values[grid.index(i, j, k)]; }

    bool finite() const {
        for (const Vec3& v : values)
            if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) return false;
        return true;
    }

    ScalarField component(int c) const {
        ScalarField f(grid);
        for (std::size_t n = 0; n < values.size(); ++n) f[n] = values[n][c];
        return f;
    }
};

inline ScalarField sample(const Grid& g, const std::function<double(Vec3)>& fn) {
    ScalarField f(g);
    for (std::size_t k = 0; k < g.dims[2]; ++k)
        for (std::size_t j = 0; j < g.dims[1]; ++j)
            for (std::size_t i = 0; i < g.dims[0]; ++i)
                f.at(i, j, k) = fn(g.node(i, j, k));
    return f;
}

inline VectorField sample(const Grid& g, const std::function<Vec3(Vec3)>& fn) {
    VectorField f(g);
    for (std::size_t k = 0; k < g.dims[2]; ++k)
        for (std::size_t j = 0; j < g.dims[1]; ++j)
            for (std::size_t i = 0; i < g.dims[0]; ++i)
                f.at(i, j, k) = fn(g.node(i, j, k));
    return f;
}

// ----- norms ---------------------------------------------------------------
// Reductions use a fixed pairwise tree so results do not depend on the
// parallel schedule.

inline double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double sup_norm(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

inline double sup_norm(const VectorField& f) {
    double m = 0.0;
    for (const Vec3& v : f.values) m = std::max(m, norm(v));
    return m;
}

inline double l2_norm(const ScalarField& f) {
    std::vector<double> sq(f.values.size());
    for (std::size_t n = 0; n < sq.size(); ++n) sq[n] = f.values[n] * f.values[n];
    return std::sqrt(pairwise_sum(sq.data(), sq.size()));
}

// Sup norm over nodes at least `margin` nodes away from every used-axis
// boundary. Iterated one-sided stencils concentrate truncation error in the
// outer layers; classification thresholds read this instead.
template <typename Visit>
inline void for_interior(const Grid& g, std::size_t margin, Visit&& visit) {
    std::array<std::size_t, 3> lo{}, hi{};
    for (int a = 0; a < 3; ++a) {
        lo[a] = g.axis_used(a) ? margin : 0;
        hi[a] = g.axis_used(a) ? g.dims[a] - margin : g.dims[a];
    }
    for (std::size_t k = lo[2]; k < hi[2]; ++k)
        for (std::size_t j = lo[1]; j < hi[1]; ++j)
            for (std::size_t i = lo[0]; i < hi[0]; ++i)
                visit(g.index(i, j, k));
}

inline double interior_sup_norm(const ScalarField& f, std::size_t margin) {
    double m = 0.0;
    for_interior(f.grid, margin, [&](std::size_t n) { m = std::max(m, std::abs(f[n])); });
    return m;
}

inline double interior_min_abs(const ScalarField& f, std::size_t margin) {
    double m = std::numeric_limits<double>::infinity();
    for_interior(f.grid, margin, [&](std::size_t n) { m = std::min(m, std::abs(f[n])); });
    return m;
}

}  // namespace beltrami
