// Command-line front end: groups / forms / recover / distance / axis / topo /
// solve. Single values go to stdout as JSON, tables to CSV files; identical
// arguments (and seed) produce byte-identical output.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "octaframe/octaframe.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace octaframe;

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> parse_doubles(const std::string& csv, std::size_t expect,
                                  const std::string& flag) {
    std::vector<double> out;
    std::string token;
    std::istringstream ss(csv);
    while (std::getline(ss, token, ',')) {
        std::size_t used = 0;
        out.push_back(std::stod(token, &used));
        if (used != token.size())
            throw CLI::ValidationError(flag, "malformed number '" + token + "'");
    }
    if (out.size() != expect)
        throw CLI::ValidationError(flag, "expected " + std::to_string(expect) +
                                             " comma-separated values");
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    return out;
}

json complex_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

int run(int argc, char** argv) {
    CLI::App app{"SU(2) octahedral frame toolbox"};
    app.require_subcommand(1);
    std::uint64_t seed = 42;
    double tol = 1e-9;
    app.add_option("--seed", seed, "PRNG seed (mt19937_64 + Box-Muller)")
        ->capture_default_str();
    app.add_option("--tol", tol, "tolerance override for surface checks")
        ->capture_default_str();

    // groups
    auto* cmd_groups = app.add_subcommand("groups", "emit a quaternion group");
    std::string group_kind = "o", groups_out;
    cmd_groups->add_option("--kind", group_kind, "v | t | o")
        ->check(CLI::IsMember({"v", "t", "o"}));
    cmd_groups->add_option("--out", groups_out, "CSV path (q0,q1,q2,q3)")
        ->required();

    // forms
    auto* cmd_forms = app.add_subcommand("forms", "invariant forms of one rotation");
    std::string forms_q, forms_uv, forms_family = "o";
    cmd_forms->add_option("--q", forms_q, "quaternion q0,q1,q2,q3");
    cmd_forms->add_option("--uv", forms_uv, "complex pair reU,imU,reV,imV");
    cmd_forms->add_option("--family", forms_family, "v | t | o")
        ->check(CLI::IsMember({"v", "t", "o"}));

    // recover
    auto* cmd_recover = app.add_subcommand("recover", "groupset of a surface point");
    std::string recover_h, recover_out;
    cmd_recover->set_help_flag("--help", "print help and exit");  // frees --h
    cmd_recover->add_option("--h", recover_h, "h0re,h0im,h1re,h1im,h2re,h2im")
        ->required();
    cmd_recover->add_option("--out", recover_out, "CSV path (u_re,u_im,v_re,v_im)")
        ->required();

    // distance sweep | random
    auto* cmd_distance = app.add_subcommand("distance", "frame distance studies");
    cmd_distance->require_subcommand(1);
    auto* cmd_sweep = cmd_distance->add_subcommand("sweep", "single-axis rotation sweep");
    std::string sweep_axis = "k", sweep_out;
    int sweep_samples = 100;
    cmd_sweep->add_option("--axis", sweep_axis, "i | j | k")
        ->check(CLI::IsMember({"i", "j", "k"}));
    cmd_sweep->add_option("--samples", sweep_samples)->check(CLI::Range(2, 1 << 24));
    cmd_sweep->add_option("--out", sweep_out, "CSV path (alpha,d_c3,d_r4)")->required();
    auto* cmd_random = cmd_distance->add_subcommand("random", "random-frame study");
    int random_n = 10000;
    std::string random_out;
    cmd_random->add_option("--n", random_n)->check(CLI::Range(1, 1 << 24));
    cmd_random->add_option("--out", random_out, "CSV path (sample,d_c3,d_r4)")
        ->required();

    // axis ellipse
    auto* cmd_axis = app.add_subcommand("axis", "shared-axis families");
    cmd_axis->require_subcommand(1);
    auto* cmd_ellipse = cmd_axis->add_subcommand("ellipse", "H0/H1 locus samples");
    std::string ellipse_n = "1,0,0", ellipse_out;
    int ellipse_samples = 500;
    cmd_ellipse->add_option("--n", ellipse_n, "axis direction x,y,z");
    cmd_ellipse->add_option("--samples", ellipse_samples)->check(CLI::Range(1, 1 << 24));
    cmd_ellipse->add_option("--out", ellipse_out,
                            "CSV path (alpha,H0_re,H0_im,H1_re,H1_im)")
        ->required();

    // topo
    auto* cmd_topo = app.add_subcommand("topo", "Euler characteristic of a mesh");
    std::string topo_mesh;
    cmd_topo->add_option("--mesh", topo_mesh, "MSH v2.2 file")->required();

    // solve
    auto* cmd_solve = app.add_subcommand("solve", "frame-field schemes");
    std::string solve_mesh, solve_scheme = "collocation", solve_out, solve_trace;
    int solve_iters = 200;
    cmd_solve->add_option("--mesh", solve_mesh, "MSH v2.2 file")->required();
    cmd_solve->add_option("--scheme", solve_scheme, "linear | collocation | metric")
        ->check(CLI::IsMember({"linear", "collocation", "metric"}));
    cmd_solve->add_option("--out", solve_out, "per-vertex CSV")->required();
    cmd_solve->add_option("--trace", solve_trace, "convergence CSV (iter,energy,grad_norm)");
    cmd_solve->add_option("--max-iters", solve_iters)->check(CLI::Range(1, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (cmd_groups->parsed()) {
        const GroupKind kind = group_kind == "v"   ? GroupKind::Vierer
                               : group_kind == "t" ? GroupKind::BinaryTetrahedral
                                                   : GroupKind::BinaryOctahedral;
        const Groupset g = elements(kind);
        auto out = open_out(groups_out);
        out << "q0,q1,q2,q3\n";
        for (const Quaternion& q : g.elements)
            out << fmt(q.q0) << ',' << fmt(q.q1) << ',' << fmt(q.q2) << ','
                << fmt(q.q3) << '\n';
        json info{{"kind", group_kind},
                  {"quaternions", g.elements.size()},
                  {"rotations", g.elements.size() / 2}};
        std::cout << info.dump() << '\n';
    } else if (cmd_forms->parsed()) {
        SU2Coord c;
        if (!forms_q.empty() && !forms_uv.empty())
            throw CLI::ValidationError("--q/--uv", "give exactly one of --q, --uv");
        if (!forms_q.empty()) {
            const auto v = parse_doubles(forms_q, 4, "--q");
            c = to_su2_frame(Quaternion{v[0], v[1], v[2], v[3]});
        } else if (!forms_uv.empty()) {
            const auto v = parse_doubles(forms_uv, 4, "--uv");
            c = {cplx{v[0], v[1]}, cplx{v[2], v[3]}};
        } else {
            throw CLI::ValidationError("--q/--uv", "give one of --q, --uv");
        }
        json out;
        if (forms_family == "v") {
            const ViererForms f = vierer_forms(c);
            out = {{"f0", complex_json(f.f0)},
                   {"f1", complex_json(f.f1)},
                   {"f2", complex_json(f.f2)},
                   {"residual", surface_residual(f)}};
        } else if (forms_family == "t") {
            const TetraForms g = tetra_forms(c);
            out = {{"g0", complex_json(g.g0)},
                   {"g1", complex_json(g.g1)},
                   {"g2", complex_json(g.g2)},
                   {"residual", surface_residual(g)}};
        } else {
            const SurfacePoint h = octa_forms(c);
            out = {{"h0", complex_json(h.h0)},
                   {"h1", complex_json(h.h1)},
                   {"h2", complex_json(h.h2)},
                   {"residual", surface_residual(h)}};
        }
        std::cout << out.dump() << '\n';
    } else if (cmd_recover->parsed()) {
        const auto v = parse_doubles(recover_h, 6, "--h");
        const SurfacePoint p{cplx{v[0], v[1]}, cplx{v[2], v[3]}, cplx{v[4], v[5]}};
        RecoverOptions opt;
        opt.surface_tol = std::max(opt.surface_tol, tol);
        const RecoverySet set = recover_groupset(p, opt);
        auto out = open_out(recover_out);
        out << "u_re,u_im,v_re,v_im\n";
        for (const SU2Coord& c : set.candidates)
            out << fmt(c.u.real()) << ',' << fmt(c.u.imag()) << ','
                << fmt(c.v.real()) << ',' << fmt(c.v.imag()) << '\n';
        json info{{"candidates", set.candidates.size()},
                  {"raw", set.raw_count},
                  {"norm", norm_from_surface(p)},
                  {"degenerate", set.degenerate_zero}};
        std::cout << info.dump() << '\n';
    } else if (cmd_sweep->parsed()) {
        const SweepAxis axis = sweep_axis == "i"   ? SweepAxis::I
                               : sweep_axis == "j" ? SweepAxis::J
                                                   : SweepAxis::K;
        const auto records = axis_sweep(axis, sweep_samples);
        auto out = open_out(sweep_out);
        out << "alpha,d_c3,d_r4\n";
        for (const DistanceRecord& r : records)
            out << fmt(r.alpha) << ',' << fmt(r.d_c3) << ',' << fmt(r.d_r4) << '\n';
    } else if (cmd_random->parsed()) {
        const auto records = random_study(random_n, seed);
        auto out = open_out(random_out);
        out << "sample,d_c3,d_r4\n";
        std::vector<double> xs, ys;
        for (const DistanceRecord& r : records) {
            out << static_cast<long long>(r.alpha) << ',' << fmt(r.d_c3) << ','
                << fmt(r.d_r4) << '\n';
            xs.push_back(r.d_c3);
            ys.push_back(r.d_r4);
        }
        json info{{"samples", random_n},
                  {"seed", seed},
                  {"spearman", records.size() > 1 ? spearman(xs, ys) : 0.0}};
        std::cout << info.dump() << '\n';
    } else if (cmd_ellipse->parsed()) {
        const auto v = parse_doubles(ellipse_n, 3, "--n");
        const Vec3 n{v[0], v[1], v[2]};
        const EllipseParams e = ellipse_params(n);
        auto out = open_out(ellipse_out);
        out << "alpha,H0_re,H0_im,H1_re,H1_im\n";
        for (int s = 0; s < ellipse_samples; ++s) {
            const double alpha = 2.0 * std::numbers::pi * s / ellipse_samples;
            const auto [H0, H1] = axis_H(n, alpha);
            out << fmt(alpha) << ',' << fmt(H0.real()) << ',' << fmt(H0.imag())
                << ',' << fmt(H1.real()) << ',' << fmt(H1.imag()) << '\n';
        }
        json info{{"p", e.p},
                  {"theta", e.theta},
                  {"semi_major", e.p + 1.0 / e.p},
                  {"semi_minor", std::abs(e.p - 1.0 / e.p)}};
        std::cout << info.dump() << '\n';
    } else if (cmd_topo->parsed()) {
        const TetMesh mesh = load_msh22(topo_mesh);
        const auto rel = topo::boundary_euler_relation(mesh);
        json info{{"chi", rel.chi_volume},
                  {"chi_boundary", rel.chi_boundary},
                  {"consistent", rel.consistent}};
        std::cout << info.dump() << '\n';
    } else if (cmd_solve->parsed()) {
        const TetMesh mesh = load_msh22(solve_mesh);
        fem::FrameField field;
        std::vector<EulerAngles> angles(mesh.vertex_count());
        const auto bc = fem::derive_boundary_angles(mesh);
        if (solve_scheme == "linear") {
            std::vector<std::optional<SurfacePoint>> bch(mesh.vertex_count());
            for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
                if (bc[v])
                    bch[v] = octa_forms(to_su2_frame(
                        from_euler_kjk({bc[v]->first, bc[v]->second, 0.0})));
            field = fem::solve_linear(mesh, bch);
        } else {
            fem::SolveOptions opt;
            opt.max_iterations = solve_iters;
            field = solve_scheme == "collocation"
                        ? fem::solve_collocation(mesh, bc, opt)
                        : fem::solve_metric(mesh, bc, opt);
            angles = field.angles;
        }
        auto out = open_out(solve_out);
        out << "id,x,y,z,alpha,beta,gamma,q0,q1,q2,q3,"
               "h0re,h0im,h1re,h1im,h2re,h2im,residual\n";
        for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
            const Vec3& x = mesh.vertices[v];
            const EulerAngles& e = angles[v];
            const Quaternion q = solve_scheme == "linear"
                                     ? Quaternion{0.0, 0.0, 0.0, 0.0}
                                     : from_euler_kjk(e);
            const SurfacePoint& h = field.points[v];
            out << (v + 1) << ',' << fmt(x[0]) << ',' << fmt(x[1]) << ','
                << fmt(x[2]) << ',' << fmt(e.alpha) << ',' << fmt(e.beta) << ','
                << fmt(e.gamma) << ',' << fmt(q.q0) << ',' << fmt(q.q1) << ','
                << fmt(q.q2) << ',' << fmt(q.q3) << ',' << fmt(h.h0.real())
                << ',' << fmt(h.h0.imag()) << ',' << fmt(h.h1.real()) << ','
                << fmt(h.h1.imag()) << ',' << fmt(h.h2.real()) << ','
                << fmt(h.h2.imag()) << ',' << fmt(field.residuals[v]) << '\n';
        }
        if (!solve_trace.empty()) {
            auto tr = open_out(solve_trace);
            tr << "iter,energy,grad_norm\n";
            for (const auto& row : field.trace)
                tr << row.iter << ',' << fmt(row.energy) << ','
                   << fmt(row.grad_norm) << '\n';
        }
        json info{{"scheme", solve_scheme},
                  {"energy", field.energy},
                  {"converged", field.converged},
                  {"vertices", mesh.vertex_count()}};
        std::cout << info.dump() << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
