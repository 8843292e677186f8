#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include "beltrami/fields.hpp"

namespace beltrami {

// BFG1 text format:
//   bfg1
//   coords <cartesian|cylindrical_rz>
//   origin x y z
//   spacing hx hy hz
//   dims nx ny nz
//   kind <scalar|vector>
//   <one node per line, row-major with x fastest, 17 significant digits>

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_bfg1_header(std::ostream& os, const Grid& g, const char* kind) {
    os << "bfg1\n";
    os << "coords "
       << (g.coords == CoordinateSystem::Cartesian ? "cartesian" : "cylindrical_rz") << "\n";
    os << "origin " << fmt17(g.origin.x) << ' ' << fmt17(g.origin.y) << ' ' << fmt17(g.origin.z)
       << "\n";
    os << "spacing " << fmt17(g.spacing.x) << ' ' << fmt17(g.spacing.y) << ' '
       << fmt17(g.spacing.z) << "\n";
    os << "dims " << g.dims[0] << ' ' << g.dims[1] << ' ' << g.dims[2] << "\n";
    os << "kind " << kind << "\n";
}

inline Grid read_bfg1_header(std::istream& is, std::string& kind) {
    auto expect_line = [&is](const char* key) -> std::istringstream {
        std::string line;
        if (!std::getline(is, line)) throw Error(std::string("BFG1: missing '") + key + "' line");
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok != key) throw Error(std::string("BFG1: expected '") + key + "', got '" + tok + "'");
        return ls;
    };
    {
        std::string line;
        if (!std::getline(is, line) || line != "bfg1") throw Error("BFG1: bad magic line");
    }
    Grid g;
    {
        auto ls = expect_line("coords");
        std::string cs;
        ls >> cs;
        if (cs == "cartesian") g.coords = CoordinateSystem::Cartesian;
        else if (cs == "cylindrical_rz") g.coords = CoordinateSystem::CylindricalRZ;
        else throw Error("BFG1: unknown coordinate system '" + cs + "'");
    }
    {
        auto ls = expect_line("origin");
        ls >> g.origin.x >> g.origin.y >> g.origin.z;
        if (!ls) throw Error("BFG1: bad origin line");
    }
    {
        auto ls = expect_line("spacing");
        ls >> g.spacing.x >> g.spacing.y >> g.spacing.z;
        if (!ls) throw Error("BFG1: bad spacing line");
    }
    {
        auto ls = expect_line("dims");
        ls >> g.dims[0] >> g.dims[1] >> g.dims[2];
        if (!ls) throw Error("BFG1: bad dims line");
    }
    {
        auto ls = expect_line("kind");
        ls >> kind;
        if (kind != "scalar" && kind != "vector") throw Error("BFG1: unknown kind '" + kind + "'");
    }
    g.validate();
    return g;
}

}  // namespace detail

inline void write_bfg1(std::ostream& os, const ScalarField& f) {
    detail::write_bfg1_header(os, f.grid, "scalar");
    for (double v : f.values) os << detail::fmt17(v) << "\n";
}

inline void write_bfg1(std::ostream& os, const VectorField& f) {
    detail::write_bfg1_header(os, f.grid, "vector");
    for (const Vec3& v : f.values)
        os << detail::fmt17(v.x) << ' ' << detail::fmt17(v.y) << ' ' << detail::fmt17(v.z) << "\n";
}

template <typename Field>
void write_bfg1_file(const std::string& path, const Field& f) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open for writing: " + path);
    write_bfg1(os, f);
}

using AnyField = std::variant<ScalarField, VectorField>;

inline AnyField read_bfg1(std::istream& is) {
    std::string kind;
    Grid g = detail::read_bfg1_header(is, kind);
    if (kind == "scalar") {
        ScalarField f(g);
        for (std::size_t n = 0; n < g.size(); ++n)
            if (!(is >> f[n])) throw Error("BFG1: truncated scalar data");
        return f;
    }
    VectorField f(g);
    for (std::size_t n = 0; n < g.size(); ++n)
        if (!(is >> f[n].x >> f[n].y >> f[n].z)) throw Error("BFG1: truncated vector data");
    return f;
}

inline AnyField read_bfg1_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open for reading: " + path);
    return read_bfg1(is);
}

inline ScalarField read_bfg1_scalar(const std::string& path) {
    AnyField f = read_bfg1_file(path);
    if (auto* s = std::get_if<ScalarField>(&f)) return *s;
    throw Error("expected a scalar BFG1 field in " + path);
}

inline VectorField read_bfg1_vector(const std::string& path) {
    AnyField f = read_bfg1_file(path);
    if (auto* v = std::get_if<VectorField>(&f)) return *v;
    throw Error("expected a vector BFG1 field in " + path);
}

// Legacy VTK structured-points export (ASCII) for external visualization.
// Cylindrical grids are written in their (r, theta, z) index space.
inline void write_vtk(std::ostream& os, const Grid& g, const std::string& name,
                      const ScalarField* scalar, const VectorField* vector) {
    os << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET STRUCTURED_POINTS\n";
    os << "DIMENSIONS " << g.dims[0] << ' ' << g.dims[1] << ' ' << g.dims[2] << "\n";
    os << "ORIGIN " << detail::fmt17(g.origin.x) << ' ' << detail::fmt17(g.origin.y) << ' '
       << detail::fmt17(g.origin.z) << "\n";
    os << "SPACING " << detail::fmt17(g.spacing.x) << ' ' << detail::fmt17(g.spacing.y) << ' '
       << detail::fmt17(g.spacing.z) << "\n";
    os << "POINT_DATA " << g.size() << "\n";
    if (scalar) {
        os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (double v : scalar->values) os << detail::fmt17(v) << "\n";
    }
    if (vector) {
        os << "VECTORS " << name << " double\n";
        for (const Vec3& v : vector->values)
            os << detail::fmt17(v.x) << ' ' << detail::fmt17(v.y) << ' ' << detail::fmt17(v.z)
               << "\n";
    }
}

inline void write_vtk_file(const std::string& path, const ScalarField& f,
                           const std::string& name = "field") {
    std::ofstream os(path);
    if (!os) throw Error("cannot open for writing: " + path);
    write_vtk(os, f.grid, name, &f, nullptr);
}

inline void write_vtk_file(const std::string& path, const VectorField& f,
                           const std::string& name = "field") {
    std::ofstream os(path);
    if (!os) throw Error("cannot open for writing: " + path);
    write_vtk(os, f.grid, name, nullptr, &f);
}

}  // namespace beltrami
