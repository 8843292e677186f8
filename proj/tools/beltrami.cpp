// Command-line front end: classify proportionality factors, construct
// symmetric fields, march Cauchy data, verify candidate fields, emit
// reference oracles, and integrate the cylindrical ODE system.
//
// Exit codes: 0 success, 2 configuration/parse error, 3 numerical failure,
// 4 indeterminate (mixed-sign) classification.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beltrami/bessel.hpp"
#include "beltrami/cauchy.hpp"
#include "beltrami/expr.hpp"
#include "beltrami/fields.hpp"
#include "beltrami/frame.hpp"
#include "beltrami/frame_pde.hpp"
#include "beltrami/io.hpp"
#include "beltrami/obstruction.hpp"
#include "beltrami/reference_fields.hpp"
#include "beltrami/report.hpp"
#include "beltrami/symmetric.hpp"

namespace bl = beltrami;
using bl::json;

namespace {

struct GridFlags {
    std::vector<double> origin{0.0, 0.0, 0.0};
    std::vector<double> spacing{1.0, 1.0, 1.0};
    std::vector<std::size_t> dims{1, 1, 1};
    std::string coords = "cartesian";
};

void add_grid_flags(CLI::App* cmd, GridFlags& gf) {
    cmd->add_option("--origin", gf.origin, "Grid origin (x,y,z or r,theta,z)")
        ->delimiter(',')
        ->expected(3);
    cmd->add_option("--spacing", gf.spacing, "Grid spacing per axis")->delimiter(',')->expected(3);
    cmd->add_option("--dims", gf.dims, "Grid node counts per axis")->delimiter(',')->expected(3);
    cmd->add_option("--coords", gf.coords, "Coordinate system")
        ->check(CLI::IsMember({"cartesian", "cylindrical"}));
}

bl::Grid make_grid(const GridFlags& gf) {
    return bl::Grid({gf.origin[0], gf.origin[1], gf.origin[2]},
                    {gf.spacing[0], gf.spacing[1], gf.spacing[2]},
                    {gf.dims[0], gf.dims[1], gf.dims[2]},
                    gf.coords == "cartesian" ? bl::CoordinateSystem::Cartesian
                                             : bl::CoordinateSystem::CylindricalRZ);
}

// Evaluate an expression at a grid node. Cartesian grids bind (x, y, z)
// directly and derive (r, theta); cylindrical grids bind (r, theta, z) and
// derive (x, y), so the same expression text works on either grid.
std::function<double(bl::Vec3)> expr_sampler(const bl::Expr& e, bl::CoordinateSystem cs) {
    return [e, cs](bl::Vec3 p) {
        bl::Bindings env;
        if (cs == bl::CoordinateSystem::Cartesian) {
            env.set(bl::Var::x, p.x)
                .set(bl::Var::y, p.y)
                .set(bl::Var::z, p.z)
                .set(bl::Var::r, std::hypot(p.x, p.y))
                .set(bl::Var::theta, std::atan2(p.y, p.x));
        } else {
            env.set(bl::Var::r, p.x)
                .set(bl::Var::theta, p.y)
                .set(bl::Var::z, p.z)
                .set(bl::Var::x, p.x * std::cos(p.y))
                .set(bl::Var::y, p.x * std::sin(p.y));
        }
        return bl::evaluate(e, env);
    };
}

// A scalar input is either a BFG1 file or an expression sampled on the
// flag-specified grid; exactly one of the two must be given.
struct ScalarInput {
    std::string file;
    std::string expr;
    GridFlags grid;
};

void add_scalar_input(CLI::App* cmd, ScalarInput& in, const std::string& name,
                      const std::string& what) {
    auto* f = cmd->add_option("--" + name + "-file", in.file, what + " as a BFG1 scalar file")
                  ->check(CLI::ExistingFile);
    auto* e = cmd->add_option("--" + name, in.expr, what + " as an expression");
    f->excludes(e);
    add_grid_flags(cmd, in.grid);
}

bl::ScalarField load_scalar(const ScalarInput& in) {
    if (!in.file.empty()) return bl::read_bfg1_scalar(in.file);
    if (in.expr.empty()) throw bl::Error("need either an expression or a BFG1 file");
    bl::Grid g = make_grid(in.grid);
    return bl::sample(g, expr_sampler(bl::parse(in.expr), g.coords));
}

std::filesystem::path prepare_out(const std::string& out_dir) {
    std::filesystem::path p(out_dir);
    std::filesystem::create_directories(p);
    return p;
}

void finish(const std::filesystem::path& out, json& report) {
    bl::write_report((out / "report.json").string(), report);
    std::cout << report.dump(2) << "\n";
}

int run_classify(const ScalarInput& f_in, double eps, std::size_t margin,
                 const std::string& out_dir, bool vtk) {
    bl::ScalarField f = load_scalar(f_in);
    bl::ClassifyOptions opts;
    opts.margin = margin;
    bl::Classification cls = bl::classify(f, eps, opts);

    auto out = prepare_out(out_dir);
    json report = bl::report_header("classify");
    report["grid"] = bl::to_json(f.grid);
    report["classification"] = bl::to_json(cls);
    if (vtk) bl::write_vtk_file((out / "f.vtk").string(), f, "f");
    finish(out, report);
    return cls.kase == bl::BeltramiCase::Indeterminate_Mixed ? 4 : 0;
}

int run_frame(const ScalarInput& f_in, const std::string& out_dir, bool vtk) {
    bl::ScalarField f = load_scalar(f_in);
    bl::AdaptedFrame fr = bl::adapted_frame(f);
    bl::FrameInvariants inv = bl::frame_invariants(f, fr);
    bl::ScalarField sres = bl::structure_residual(fr, inv);

    auto out = prepare_out(out_dir);
    bl::write_bfg1_file((out / "e1.bfg1").string(), fr.e1);
    bl::write_bfg1_file((out / "e2.bfg1").string(), fr.e2);
    bl::write_bfg1_file((out / "e3.bfg1").string(), fr.e3);
    const std::pair<const char*, const bl::ScalarField*> scalars[] = {
        {"h11", &inv.h11}, {"h12", &inv.h12}, {"h22", &inv.h22}, {"k1", &inv.k1},
        {"k2", &inv.k2},   {"k3", &inv.k3},   {"g1", &inv.g1},   {"g2", &inv.g2},
    };
    json sup;
    for (auto [name, field] : scalars) {
        bl::write_bfg1_file((out / (std::string(name) + ".bfg1")).string(), *field);
        sup[name] = bl::sup_norm(*field);
    }
    if (vtk) {
        bl::write_vtk_file((out / "e3.vtk").string(), fr.e3, "e3");
        bl::write_vtk_file((out / "structure_residual.vtk").string(), sres, "structure_residual");
    }

    json report = bl::report_header("frame");
    report["grid"] = bl::to_json(f.grid);
    report["sup"] = sup;
    report["structure_residual_sup"] = bl::interior_sup_norm(sres, 2);
    finish(out, report);
    return 0;
}

int run_construct(const std::string& symmetry, const std::string& phi_text,
                  const ScalarInput& bc_in, double newton_tol, const std::string& out_dir,
                  bool vtk) {
    bl::Expr Phi = bl::parse(phi_text);
    bl::ScalarField bc = load_scalar(bc_in);
    bl::NewtonOptions nopt;
    nopt.tol = newton_tol;

    bl::FluxSolve fs = symmetry == "translation" ? bl::solve_translation(Phi, bc, nopt)
                                                 : bl::solve_rotation(Phi, bc, nopt);
    auto [u, f] = symmetry == "translation" ? bl::assemble_translation(fs)
                                            : bl::assemble_rotation(fs);
    bl::VerifyReport vr = bl::verify_beltrami(u, f);

    auto out = prepare_out(out_dir);
    bl::write_bfg1_file((out / "H.bfg1").string(), fs.H);
    bl::write_bfg1_file((out / "u.bfg1").string(), u);
    bl::write_bfg1_file((out / "f.bfg1").string(), f);
    if (vtk) bl::write_vtk_file((out / "u.vtk").string(), u, "u");

    json report = bl::report_header("construct");
    report["symmetry"] = symmetry;
    report["phi"] = bl::print(Phi);
    report["grid"] = bl::to_json(bc.grid);
    report["newton"]["iterations"] = fs.iterations;
    report["newton"]["residual_history"] = fs.residual_history;
    report["verify"] = bl::to_json(vr);
    finish(out, report);
    return 0;
}

int run_verify(const std::string& u_file, const ScalarInput& f_in, const std::string& out_dir) {
    bl::VectorField u = bl::read_bfg1_vector(u_file);
    ScalarInput f_eff = f_in;
    if (f_eff.file.empty()) {
        // Expressions for f are sampled on the candidate field's own grid.
        bl::ScalarField f = bl::sample(u.grid, expr_sampler(bl::parse(f_eff.expr), u.grid.coords));
        bl::VerifyReport vr = bl::verify_beltrami(u, f);
        auto out = prepare_out(out_dir);
        json report = bl::report_header("verify");
        report["grid"] = bl::to_json(u.grid);
        report["verify"] = bl::to_json(vr);
        finish(out, report);
        return 0;
    }
    bl::ScalarField f = bl::read_bfg1_scalar(f_eff.file);
    bl::VerifyReport vr = bl::verify_beltrami(u, f);
    auto out = prepare_out(out_dir);
    json report = bl::report_header("verify");
    report["grid"] = bl::to_json(u.grid);
    report["verify"] = bl::to_json(vr);
    finish(out, report);
    return 0;
}

int run_march(const std::string& slice_file, double depth, std::size_t steps, double filter_frac,
              double u3_min, const std::string& out_dir, bool vtk) {
    bl::VectorField s = bl::read_bfg1_vector(slice_file);
    if (s.grid.dims[2] != 1) throw bl::Error("march: initial slice must have nz == 1");
    bl::CauchySlice slice;
    slice.nx = s.grid.dims[0];
    slice.ny = s.grid.dims[1];
    slice.hx = s.grid.spacing.x;
    slice.hy = s.grid.spacing.y;
    slice.x0 = s.grid.origin.x;
    slice.y0 = s.grid.origin.y;
    slice.x3 = s.grid.origin.z;
    slice.u1.resize(s.values.size());
    slice.u2.resize(s.values.size());
    slice.u3.resize(s.values.size());
    for (std::size_t n = 0; n < s.values.size(); ++n) {
        slice.u1[n] = s.values[n].x;
        slice.u2[n] = s.values[n].y;
        slice.u3[n] = s.values[n].z;
    }

    bl::MarchOptions mopts;
    mopts.filter_frac = filter_frac;
    mopts.u3_min = u3_min;
    bl::VectorField u = bl::march(slice, depth, steps, mopts);
    bl::ScalarField f = bl::recover_f(u, u3_min, bl::SliceDerivative::Spectral);
    bl::MarchResidual res = bl::march_residual(u, f);

    auto out = prepare_out(out_dir);
    bl::write_bfg1_file((out / "u.bfg1").string(), u);
    bl::write_bfg1_file((out / "f.bfg1").string(), f);
    if (vtk) bl::write_vtk_file((out / "u.vtk").string(), u, "u");

    json report = bl::report_header("march");
    report["grid"] = bl::to_json(u.grid);
    report["depth"] = depth;
    report["steps"] = steps;
    report["curl_residual"] = res.curl_res;
    report["div_residual"] = res.div_res;
    finish(out, report);
    return 0;
}

struct OracleFlags {
    std::string kind = "abc";
    std::string F = "x*y";                    // harmonic-gradient potential
    double A = 1.0, B = 1.0, C = 0.5, c = 1;  // abc / lundquist parameters
    std::string phi = "1";                    // planar-cr (in z) / cylinder (in r)
    std::string v = "0", w = "1";             // planar-cr holomorphic pair
    double u1_0 = 0.0, u2_0 = 1.0, r0 = 1.0;  // cylinder initial data
};

int run_oracle(const OracleFlags& of, const GridFlags& gf, const std::string& out_dir, bool vtk) {
    bl::OracleSpec spec;
    spec.grid = make_grid(gf);
    if (of.kind == "harmonic-gradient") {
        spec.kind = bl::HarmonicGradientSpec{bl::parse(of.F)};
    } else if (of.kind == "abc") {
        spec.kind = bl::ABCSpec{of.A, of.B, of.C, of.c};
    } else if (of.kind == "planar-cr") {
        spec.kind = bl::PlanarCRSpec{bl::parse(of.phi), bl::parse(of.v), bl::parse(of.w)};
    } else if (of.kind == "cylinder") {
        spec.kind = bl::CylinderSpec{bl::parse(of.phi), of.u1_0, of.u2_0, of.r0};
    } else {
        spec.kind = bl::LundquistSpec{of.c};
    }
    auto [u, f] = bl::materialize(spec);
    bl::VerifyReport vr = bl::verify_beltrami(u, f);

    auto out = prepare_out(out_dir);
    bl::write_bfg1_file((out / "u.bfg1").string(), u);
    bl::write_bfg1_file((out / "f.bfg1").string(), f);
    if (vtk) bl::write_vtk_file((out / "u.vtk").string(), u, "u");

    json report = bl::report_header("oracle");
    report["kind"] = of.kind;
    report["grid"] = bl::to_json(spec.grid);
    report["verify"] = bl::to_json(vr);
    finish(out, report);
    return 0;
}

int run_ode(const std::string& phi_text, double r0, double r1, double u1_0, double u2_0,
            double step, const std::string& out_dir) {
    bl::Expr phi = bl::parse(phi_text);
    auto samples = bl::cylinder_ode_solve(phi, r0, u1_0, u2_0, r1, step);

    auto out = prepare_out(out_dir);
    std::ofstream csv(out / "ode.csv");
    csv << "r,u1,u2\n";
    for (const auto& s : samples)
        csv << bl::detail::fmt17(s.r) << ',' << bl::detail::fmt17(s.u1) << ','
            << bl::detail::fmt17(s.u2) << "\n";

    json report = bl::report_header("ode");
    report["phi"] = bl::print(phi);
    report["r0"] = r0;
    report["r1"] = r1;
    report["samples"] = samples.size();
    report["final"]["r"] = samples.back().r;
    report["final"]["u1"] = samples.back().u1;
    report["final"]["u2"] = samples.back().u2;
    finish(out, report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Beltrami field toolkit: classification, construction, and verification of "
                 "vector fields satisfying curl u = f u, div u = 0"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Line-oriented key = value config file; flags win");

    std::string out_dir = ".";
    bool vtk = false;
    app.add_option("--out", out_dir, "Output directory for the JSON report and fields")
        ->capture_default_str();
    app.add_flag("--vtk", vtk, "Also export fields in legacy VTK structured-points format");

    // classify
    auto* classify = app.add_subcommand("classify", "Classify a proportionality factor f");
    ScalarInput cf;
    double eps = 1e-4;
    std::size_t margin = 2;
    add_scalar_input(classify, cf, "f", "Proportionality factor");
    classify->add_option("--eps", eps, "Relative sup-norm threshold for 'identically zero'")
        ->capture_default_str();
    classify->add_option("--margin", margin, "Interior margin (nodes) excluded from sup norms")
        ->capture_default_str();

    // frame
    auto* frame = app.add_subcommand("frame", "Compute the adapted frame and its invariants");
    ScalarInput ff;
    add_scalar_input(frame, ff, "f", "Proportionality factor");

    // construct
    auto* construct = app.add_subcommand("construct", "Construct a symmetric Beltrami field");
    std::string symmetry = "translation";
    std::string phi_text;
    double newton_tol = 1e-10;
    ScalarInput bc;
    construct->add_option("--symmetry", symmetry, "Symmetry of the construction")
        ->check(CLI::IsMember({"translation", "rotation"}))
        ->capture_default_str();
    construct->add_option("--phi", phi_text, "Profile Phi as an expression in t")->required();
    construct->add_option("--newton-tol", newton_tol, "Newton residual tolerance")
        ->capture_default_str();
    add_scalar_input(construct, bc, "bc", "Dirichlet boundary values for the flux function");

    // verify
    auto* verify = app.add_subcommand("verify", "Report residuals of a candidate (u, f) pair");
    std::string u_file;
    ScalarInput vf;
    verify->add_option("--u", u_file, "Candidate field as a BFG1 vector file")
        ->required()
        ->check(CLI::ExistingFile);
    add_scalar_input(verify, vf, "f", "Proportionality factor");

    // march
    auto* march = app.add_subcommand("march", "March Cauchy data off an initial plane slice");
    std::string slice_file;
    double depth = 0.1;
    std::size_t steps = 16;
    double filter_frac = 2.0 / 3.0;
    double u3_min = 1e-6;
    march->add_option("--slice", slice_file, "Initial data as a BFG1 vector file with nz == 1")
        ->required()
        ->check(CLI::ExistingFile);
    march->add_option("--depth", depth, "Marching depth")->capture_default_str();
    march->add_option("--steps", steps, "Number of marching steps")->capture_default_str();
    march->add_option("--filter-frac", filter_frac, "Spectral low-pass fraction")
        ->capture_default_str();
    march->add_option("--u3-min", u3_min, "Abort when |u3| drops below this")
        ->capture_default_str();

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Materialize a reference field family");
    OracleFlags of;
    GridFlags og;
    oracle->add_option("--kind", of.kind, "Reference family")
        ->check(CLI::IsMember({"harmonic-gradient", "abc", "planar-cr", "cylinder", "lundquist"}))
        ->capture_default_str();
    oracle->add_option("--F", of.F, "Harmonic potential (harmonic-gradient)");
    oracle->add_option("--A", of.A, "ABC coefficient A")->capture_default_str();
    oracle->add_option("--B", of.B, "ABC coefficient B")->capture_default_str();
    oracle->add_option("--C", of.C, "ABC coefficient C")->capture_default_str();
    oracle->add_option("--c", of.c, "Constant factor (abc, lundquist)")->capture_default_str();
    oracle->add_option("--phi", of.phi, "Factor profile (planar-cr: in z; cylinder: in r)");
    oracle->add_option("--v", of.v, "Holomorphic pair component v (planar-cr)");
    oracle->add_option("--w", of.w, "Holomorphic pair component w (planar-cr)");
    oracle->add_option("--u1-0", of.u1_0, "Initial u1 at r0 (cylinder)")->capture_default_str();
    oracle->add_option("--u2-0", of.u2_0, "Initial u2 at r0 (cylinder)")->capture_default_str();
    oracle->add_option("--r0", of.r0, "Anchor radius (cylinder)")->capture_default_str();
    add_grid_flags(oracle, og);

    // ode
    auto* ode = app.add_subcommand("ode", "Integrate the concentric-cylinder ODE system");
    std::string ophi = "1";
    double r0 = 1.0, r1 = 2.0, u1_0 = 0.0, u2_0 = 1.0, ostep = 1e-3;
    ode->add_option("--phi", ophi, "Factor profile as an expression in r")->required();
    ode->add_option("--r0", r0, "Start radius")->capture_default_str();
    ode->add_option("--r1", r1, "End radius")->capture_default_str();
    ode->add_option("--u1-0", u1_0, "Initial u1 (theta component)")->capture_default_str();
    ode->add_option("--u2-0", u2_0, "Initial u2 (z component)")->capture_default_str();
    ode->add_option("--step", ostep, "RK4 step size")->capture_default_str();

    // Let --out/--vtk/--config be given after the subcommand name too.
    for (auto* s : app.get_subcommands([](const CLI::App*) { return true; })) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (classify->parsed()) return run_classify(cf, eps, margin, out_dir, vtk);
        if (frame->parsed()) return run_frame(ff, out_dir, vtk);
        if (construct->parsed())
            return run_construct(symmetry, phi_text, bc, newton_tol, out_dir, vtk);
        if (verify->parsed()) return run_verify(u_file, vf, out_dir);
        if (march->parsed())
            return run_march(slice_file, depth, steps, filter_frac, u3_min, out_dir, vtk);
        if (oracle->parsed()) return run_oracle(of, og, out_dir, vtk);
        if (ode->parsed())
            return run_ode(ophi, r0, r1, u1_0, u2_0, ostep, out_dir);
    } catch (const bl::NewtonDiverged& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const bl::BlowUp& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const bl::U3Vanished& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const bl::IncompatibleInitialData& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const bl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
