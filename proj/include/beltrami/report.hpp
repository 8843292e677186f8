#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "beltrami/obstruction.hpp"
#include "beltrami/symmetric.hpp"

namespace beltrami {

using json = nlohmann::ordered_json;

inline json report_header(const std::string& subcommand) {
    json j;
    j["schema"] = "beltrami-report/1";
    j["subcommand"] = subcommand;
    return j;
}

inline json to_json(const Grid& g) {
    json j;
    j["coords"] = g.coords == CoordinateSystem::Cartesian ? "cartesian" : "cylindrical_rz";
    j["origin"] = {g.origin.x, g.origin.y, g.origin.z};
    j["spacing"] = {g.spacing[0], g.spacing[1], g.spacing[2]};
    j["dims"] = {g.dims[0], g.dims[1], g.dims[2]};
    return j;
}

inline json to_json(const VerifyReport& r) {
    json j;
    j["curl_res"] = r.curl_res;
    j["div_res"] = r.div_res;
    j["ortho_res"] = r.ortho_res;
    return j;
}

inline json to_json(const Classification& c) {
    json j;
    j["case"] = to_string(c.kase);
    j["solution_space"] = to_string(c.predicted);
    j["predicted_dim"] = c.predicted_dim;
    j["second_level_vanishes"] = c.second_level_vanishes;
    j["eps"] = c.eps;
    j["margin"] = c.margin;
    json d;
    d["sup_c_p1"] = c.sup_c_p1;
    d["sup_c_u1"] = c.sup_c_u1;
    d["sup_c_u2"] = c.sup_c_u2;
    d["sup_second_level"] = c.sup_second_level;
    d["sup_g1"] = c.sup_g1;
    d["sup_g2"] = c.sup_g2;
    d["sup_h"] = c.sup_h;
    j["diagnostics"] = d;
    return j;
}

inline void write_report(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open report file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace beltrami
