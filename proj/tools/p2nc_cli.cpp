// Command-line driver: mesh inspection, single-level solves, convergence
// studies, verification suites and inf-sup estimates.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "p2nc/harness.hpp"
#include "p2nc/manufactured.hpp"
#include "p2nc/mesh.hpp"

namespace {

void write_json(const nlohmann::json& j, const std::string& path)
{
    std::ofstream out(path);
    if (!out) {
        throw p2nc::InvalidArgument("cannot open " + path + " for writing");
    }
    out << j.dump(2) << '\n';
}

int run_mesh(int n, const std::string& vtk)
{
    const auto mesh = p2nc::build_cube_mesh(n);
    std::printf("n = %d\n", n);
    std::printf("vertices %zu (interior %zu)\n", mesh.num_vertices(), mesh.interior_vertex_ids().size());
    std::printf("edges    %zu (interior %zu)\n", mesh.num_edges(), mesh.interior_edge_ids().size());
    std::printf("faces    %zu (interior %zu)\n", mesh.num_faces(), mesh.interior_face_ids().size());
    std::printf("tets     %zu\n", mesh.num_tets());
    std::printf("h        %.17g\n", mesh.h());
    std::printf("volume   %.17g\n", mesh.total_volume());
    const auto dofs = p2nc::build_dof_map(mesh);
    std::printf("velocity dofs %d (conforming %d, central %d, face %d), pressure dofs %d\n", dofs.num_velocity(),
                dofs.num_conforming(), dofs.num_central(), dofs.num_face(), dofs.num_pressure());
    if (!vtk.empty()) {
        p2nc::write_vtk(mesh, vtk);
        std::printf("wrote %s\n", vtk.c_str());
    }
    return 0;
}

int run_solve(int level, int quad_degree, const std::string& out)
{
    p2nc::ConvergenceConfig cfg;
    cfg.load_degree = quad_degree;
    cfg.error_degree = quad_degree;
    const auto r = p2nc::solve_level(level, cfg);
    std::printf("level %d (n = %d): %d velocity + %d pressure dofs\n", r.level, r.n, r.num_velocity, r.num_pressure);
    std::printf("|u-uh|_0            = %.6e\n", r.errors.l2_velocity);
    std::printf("|grad_h(u-uh)|_0    = %.6e\n", r.errors.h1_broken);
    std::printf("|p-ph|_0            = %.6e\n", r.errors.l2_pressure);
    std::printf("momentum residual   = %.3e\n", r.solver.momentum_residual);
    std::printf("divergence residual = %.3e\n", r.solver.divergence_residual);
    if (!out.empty()) {
        write_json(p2nc::to_json(r), out);
    }
    return 0;
}

int run_convergence(int max_level, bool allow_level5, bool with_infsup, const std::string& csv, const std::string& json)
{
    p2nc::ConvergenceConfig cfg;
    cfg.level_cap = allow_level5 ? 5 : 4;
    cfg.with_infsup = with_infsup;
    const auto table = p2nc::run_convergence(max_level, cfg);
    std::fputs(p2nc::format_table(table).c_str(), stdout);
    if (!csv.empty()) {
        p2nc::write_csv(table, csv);
    }
    if (!json.empty()) {
        write_json(p2nc::to_json(table), json);
    }
    return 0;
}

int run_verify(const std::string& suite, std::optional<int> level, const std::string& json)
{
    p2nc::VerifyOptions opts;
    opts.level = level;
    const auto report = p2nc::verify(p2nc::parse_suite(suite), opts);
    for (const auto& c : report.checks) {
        std::printf("[%s] %-40s value %.3e  tol %.1e  %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.value,
                    c.tolerance, c.detail.c_str());
    }
    const auto j = report.to_json();
    if (!json.empty()) {
        write_json(j, json);
    }
    if (!report.passed()) {
        std::cout << j["failures"].dump() << '\n';
        return 1;
    }
    return 0;
}

int run_infsup(int max_level, bool seminorm, bool dense)
{
    if (max_level > 3) {
        throw p2nc::InvalidArgument("infsup estimates are limited to level <= 3");
    }
    std::printf("%5s %8s %14s %14s %6s\n", "level", "n", "beta(lanczos)", "beta(dense)", "iters");
    for (int level = 1; level <= max_level; ++level) {
        p2nc::InfSupConfig cfg;
        cfg.seminorm = seminorm;
        cfg.dense = dense || level == 1;
        const auto est = p2nc::estimate_infsup_level(level, cfg);
        std::printf("%5d %8d %14.10f %14s %6d\n", level, p2nc::level_to_n(level), est.lanczos->beta,
                    est.dense ? std::to_string(est.dense->beta).c_str() : "-", est.lanczos->iterations);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Nonconforming P2 / discontinuous P1 Stokes solver on tetrahedral grids"};
    app.require_subcommand(1);

    int mesh_n = 1;
    std::string mesh_vtk;
    auto* mesh_cmd = app.add_subcommand("mesh", "Build the n x n x n cube mesh and print entity counts");
    mesh_cmd->add_option("--n", mesh_n, "Cells per cube edge")->required()->check(CLI::PositiveNumber);
    mesh_cmd->add_option("--vtk", mesh_vtk, "Write the mesh as legacy VTK");

    int solve_level = 1;
    int quad_degree = 10;
    std::string solve_out;
    auto* solve_cmd = app.add_subcommand("solve", "Solve the manufactured problem on one grid level");
    solve_cmd->add_option("--level", solve_level, "Grid level (n = 2^(level-1))")->required()->check(CLI::Range(1, 5));
    solve_cmd->add_option("--quad-degree", quad_degree, "Load/error quadrature degree")->check(CLI::Range(0, 40));
    solve_cmd->add_option("--out", solve_out, "JSON report");

    int conv_max = 4;
    bool allow_level5 = false;
    bool conv_infsup = false;
    std::string conv_csv;
    std::string conv_json;
    auto* conv_cmd = app.add_subcommand("convergence", "Error/rate table over levels 1..max");
    conv_cmd->add_option("--max-level", conv_max, "Finest level")->required()->check(CLI::Range(1, 5));
    conv_cmd->add_flag("--allow-level5", allow_level5, "Lift the default level-4 cap");
    conv_cmd->add_flag("--infsup", conv_infsup, "Also report beta_h on levels <= 3");
    conv_cmd->add_option("--csv", conv_csv, "CSV output");
    conv_cmd->add_option("--json", conv_json, "JSON output");

    std::string suite;
    std::optional<int> verify_level;
    std::string verify_json;
    auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
    verify_cmd->add_option("--suite", suite, "dofs, jumps, unisolvence or infsup")
        ->required()
        ->check(CLI::IsMember({"dofs", "jumps", "unisolvence", "infsup"}));
    verify_cmd->add_option("--level", verify_level, "Grid level")->check(CLI::Range(1, 4));
    verify_cmd->add_option("--json", verify_json, "JSON report");

    int infsup_max = 3;
    bool infsup_seminorm = false;
    bool infsup_dense = false;
    auto* infsup_cmd = app.add_subcommand("infsup", "Estimate the discrete inf-sup constant per level");
    infsup_cmd->add_option("--max-level", infsup_max, "Finest level")->required()->check(CLI::Range(1, 3));
    infsup_cmd->add_flag("--seminorm", infsup_seminorm, "Use the broken H1 seminorm instead of the full norm");
    infsup_cmd->add_flag("--dense", infsup_dense, "Cross-check with the dense eigensolver on every level");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*mesh_cmd) {
            return run_mesh(mesh_n, mesh_vtk);
        }
        if (*solve_cmd) {
            return run_solve(solve_level, quad_degree, solve_out);
        }
        if (*conv_cmd) {
            return run_convergence(conv_max, allow_level5, conv_infsup, conv_csv, conv_json);
        }
        if (*verify_cmd) {
            return run_verify(suite, verify_level, verify_json);
        }
        if (*infsup_cmd) {
            return run_infsup(infsup_max, infsup_seminorm, infsup_dense);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
