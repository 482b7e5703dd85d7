#include "p2nc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "p2nc/manufactured.hpp"
#include "p2nc/quadrature.hpp"

namespace p2nc {

int level_to_n(int level)
{
    if (level < 1 || level > 12) {
        throw InvalidArgument("grid level must be in 1..12, got " + std::to_string(level));
    }
    return 1 << (level - 1);
}

double observed_rate(double coarse_error, double fine_error)
{
    return std::log2(coarse_error / fine_error);
}

LevelResult solve_level(int level, const ConvergenceConfig& config)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto problem = manufactured();
    const int n = level_to_n(level);
    const TetMesh mesh = build_cube_mesh(n);
    const DofMap dofs = build_dof_map(mesh);
    AssemblyConfig ac;
    ac.load_degree = config.load_degree;
    const SaddleSystem sys = assemble(mesh, dofs, problem.f, ac);

    Solution sol;
    try {
        sol = solve_stokes(sys);
    } catch (const SolverError& e) {
        throw SolverError("level " + std::to_string(level) + ": " + e.what());
    }

    LevelResult r;
    r.level = level;
    r.n = n;
    r.num_velocity = dofs.num_velocity();
    r.num_pressure = dofs.num_pressure();
    r.errors = compute_errors(mesh, dofs, sol.u, sol.p, problem.exact(), config.error_degree);
    r.errors.level = level;
    r.solver = sol.stats;
    if (config.with_infsup && level <= 3) {
        InfSupConfig ic;
        ic.seminorm = config.seminorm_infsup;
        r.beta = estimate_infsup_level(level, ic).lanczos->beta;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

ConvergenceTable run_convergence(int max_level, const ConvergenceConfig& config)
{
    if (max_level < 1) {
        throw InvalidArgument("max level must be at least 1");
    }
    if (max_level > config.level_cap) {
        throw InvalidArgument("max level " + std::to_string(max_level) + " exceeds the resource cap " +
                              std::to_string(config.level_cap));
    }
    ConvergenceTable table;
    for (int level = 1; level <= max_level; ++level) {
        LevelResult r = solve_level(level, config);
        if (!table.rows.empty()) {
            const auto& prev = table.rows.back().errors;
            r.rate_l2_velocity = observed_rate(prev.l2_velocity, r.errors.l2_velocity);
            r.rate_h1_broken = observed_rate(prev.h1_broken, r.errors.h1_broken);
            r.rate_l2_pressure = observed_rate(prev.l2_pressure, r.errors.l2_pressure);
        }
        table.rows.push_back(std::move(r));
    }
    return table;
}

InfSupLevel estimate_infsup_level(int level, const InfSupConfig& config)
{
    const TetMesh mesh = build_cube_mesh(level_to_n(level));
    const DofMap dofs = build_dof_map(mesh);
    SparseMatrix norm = assemble_stiffness(mesh, dofs);
    if (!config.seminorm) {
        norm += assemble_velocity_mass(mesh, dofs);
    }
    const SaddleSystem sys = assemble(mesh, dofs, [](const Vec3&) -> Vec3 { return Vec3::Zero(); });
    const SparseMatrix mp = assemble_pressure_mass(mesh, dofs);

    InfSupLevel out;
    out.level = level;
    if (config.dense) {
        out.dense = estimate_infsup_dense(norm, sys.B, mp, sys.c);
        out.dense->level = level;
    }
    if (config.lanczos) {
        out.lanczos = estimate_infsup_lanczos(norm, sys.B, mp, sys.c);
        out.lanczos->level = level;
    }
    return out;
}

// Reports --------------------------------------------------------------------

namespace {

std::string fmt_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v)
{
    return v ? fmt_double(*v) : std::string();
}

nlohmann::json opt_json(const std::optional<double>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

} // namespace

std::string to_csv(const ConvergenceTable& table)
{
    std::string out = "level,h,l2_velocity,rate_l2_velocity,h1_broken,rate_h1_broken,l2_pressure,rate_l2_pressure\n";
    for (const auto& r : table.rows) {
        out += std::to_string(r.level) + ',' + fmt_double(r.errors.h) + ',' + fmt_double(r.errors.l2_velocity) + ',' +
               fmt_opt(r.rate_l2_velocity) + ',' + fmt_double(r.errors.h1_broken) + ',' + fmt_opt(r.rate_h1_broken) +
               ',' + fmt_double(r.errors.l2_pressure) + ',' + fmt_opt(r.rate_l2_pressure) + '\n';
    }
    return out;
}

void write_csv(const ConvergenceTable& table, const std::filesystem::path& path)
{
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (f == nullptr) {
        throw InvalidArgument("cannot open " + path.string() + " for writing");
    }
    const auto text = to_csv(table);
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
}

nlohmann::json to_json(const LevelResult& r)
{
    nlohmann::json j;
    j["level"] = r.level;
    j["n"] = r.n;
    j["h"] = r.errors.h;
    j["num_velocity_dofs"] = r.num_velocity;
    j["num_pressure_dofs"] = r.num_pressure;
    j["errors"] = {{"l2_velocity", r.errors.l2_velocity},
                   {"h1_broken", r.errors.h1_broken},
                   {"l2_pressure", r.errors.l2_pressure}};
    j["rates"] = {{"l2_velocity", opt_json(r.rate_l2_velocity)},
                  {"h1_broken", opt_json(r.rate_h1_broken)},
                  {"l2_pressure", opt_json(r.rate_l2_pressure)}};
    j["solver"] = {{"unknowns", r.solver.num_unknowns},
                   {"nonzeros", r.solver.nonzeros},
                   {"factorization", r.solver.factorization},
                   {"momentum_residual", r.solver.momentum_residual},
                   {"divergence_residual", r.solver.divergence_residual},
                   {"mean_residual", r.solver.mean_residual}};
    if (r.beta) {
        j["beta_h"] = *r.beta;
    }
    return j;
}

nlohmann::json to_json(const ConvergenceTable& table)
{
    nlohmann::json j;
    j["problem"] = "manufactured";
    j["levels"] = nlohmann::json::array();
    for (const auto& r : table.rows) {
        j["levels"].push_back(to_json(r));
    }
    return j;
}

std::string format_table(const ConvergenceTable& table)
{
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%5s %10s | %11s %5s | %11s %5s | %11s %5s\n", "level", "h", "|u-uh|_0", "rate",
                  "|grad(u-uh)|", "rate", "|p-ph|_0", "rate");
    out += buf;
    for (const auto& r : table.rows) {
        std::snprintf(buf, sizeof(buf), "%5d %10.4e | %11.3E %5.1f | %11.3E %5.1f | %11.3E %5.1f\n", r.level,
                      r.errors.h, r.errors.l2_velocity, r.rate_l2_velocity.value_or(0.0), r.errors.h1_broken,
                      r.rate_h1_broken.value_or(0.0), r.errors.l2_pressure, r.rate_l2_pressure.value_or(0.0));
        out += buf;
    }
    return out;
}

// Verification ----------------------------------------------------------------

bool VerifyReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::json VerifyReport::to_json() const
{
    nlohmann::json j;
    j["suite"] = suite;
    j["passed"] = passed();
    j["checks"] = nlohmann::json::array();
    j["failures"] = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json cj = {{"name", c.name},
                             {"passed", c.passed},
                             {"value", c.value},
                             {"tolerance", c.tolerance},
                             {"detail", c.detail}};
        j["checks"].push_back(cj);
        if (!c.passed) {
            j["failures"].push_back(c.name);
        }
    }
    return j;
}

Suite parse_suite(const std::string& name)
{
    if (name == "dofs") {
        return Suite::Dofs;
    }
    if (name == "jumps") {
        return Suite::Jumps;
    }
    if (name == "unisolvence") {
        return Suite::Unisolvence;
    }
    if (name == "infsup") {
        return Suite::InfSup;
    }
    throw InvalidArgument("unknown suite '" + name + "' (expected dofs, jumps, unisolvence or infsup)");
}

std::string suite_name(Suite suite)
{
    switch (suite) {
    case Suite::Dofs:
        return "dofs";
    case Suite::Jumps:
        return "jumps";
    case Suite::Unisolvence:
        return "unisolvence";
    case Suite::InfSup:
        return "infsup";
    }
    return "unknown";
}

std::array<Vec3, 4> random_tet(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (;;) {
        std::array<Vec3, 4> v;
        for (auto& p : v) {
            p = Vec3(dist(rng), dist(rng), dist(rng));
        }
        const double vol = (v[1] - v[0]).dot((v[2] - v[0]).cross(v[3] - v[0])) / 6.0;
        double hmax = 0.0;
        for (const auto& e : kLocalEdges) {
            hmax = std::max(hmax, (v[e[0]] - v[e[1]]).norm());
        }
        // Reject slivers: a regular tet has vol/h^3 ~ 0.118.
        if (std::abs(vol) < 0.01 * hmax * hmax * hmax) {
            continue;
        }
        if (vol < 0.0) {
            std::swap(v[2], v[3]);
        }
        return v;
    }
}

namespace {

// (1/|F_j|) int_{F_j} shape * lambda_m dS for local face j of a single tet.
double normalized_face_moment(const TetGeometry& geom, int shape, int face, int m)
{
    const auto& rule = cached_quadrature(QuadDomain::Triangle, 4);
    const auto& fv = kLocalFaceVertices[face];
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        BarycentricPoint l{0.0, 0.0, 0.0, 0.0};
        for (int k = 0; k < 3; ++k) {
            l[fv[k]] = rule.points[q][k];
        }
        const auto shapes = eval_all_shapes(l, geom);
        s += rule.weights[q] * shapes[shape].value * l[m];
    }
    return s;
}

CheckResult make_check(std::string name, double value, double tolerance, std::string detail = {})
{
    return {std::move(name), value <= tolerance, value, tolerance, std::move(detail)};
}

} // namespace

VerifyReport verify_dofs(int num_tets, unsigned seed)
{
    VerifyReport rep;
    rep.suite = "dofs";
    std::mt19937_64 rng(seed);
    constexpr double tol = 1e-12;
    double phi0_center = 0.0;
    double phi0_moments = 0.0;
    double face_center = 0.0;
    double face_own = 0.0;
    double face_other = 0.0;
    const BarycentricPoint center{0.25, 0.25, 0.25, 0.25};
    for (int t = 0; t < num_tets; ++t) {
        const TetGeometry geom = compute_tet_geometry(random_tet(rng));
        phi0_center = std::max(phi0_center, std::abs(eval_phi0(center, geom).value - 1.0));
        for (int i = 0; i < 4; ++i) {
            face_center = std::max(face_center, std::abs(eval_phi_face(i, center, geom).value));
            for (int j = 0; j < 4; ++j) {
                for (int m = 0; m < 4; ++m) {
                    if (m == j) {
                        continue; // lambda_j vanishes on F_j
                    }
                    if (i == 0) {
                        phi0_moments =
                            std::max(phi0_moments, std::abs(normalized_face_moment(geom, kCentralBubble, j, m)));
                    }
                    const double mom = normalized_face_moment(geom, kFirstFaceBubble + i, j, m);
                    if (j == i) {
                        face_own = std::max(face_own, std::abs(mom - 1.0));
                    } else {
                        face_other = std::max(face_other, std::abs(mom));
                    }
                }
            }
        }
    }
    const std::string n = std::to_string(num_tets) + " random tets";
    rep.checks.push_back(make_check("phi0_barycenter_value", phi0_center, tol, "|Phi0(e_T) - 1|, " + n));
    rep.checks.push_back(make_check("phi0_face_moments", phi0_moments, tol, "max |int_Fi Phi0 l_j|/|Fi|, " + n));
    rep.checks.push_back(make_check("face_bubble_barycenter_value", face_center, tol, "|Phi_i(e_T)|, " + n));
    rep.checks.push_back(
        make_check("face_bubble_own_face_moments", face_own, tol, "max |int_Fi Phi_i l_m/|Fi| - 1|, " + n));
    rep.checks.push_back(
        make_check("face_bubble_other_face_moments", face_other, tol, "max |int_Fj Phi_i l_m|/|Fj|, j != i, " + n));
    return rep;
}

JumpSummary scan_jumps(const TetMesh& mesh, const DofMap& dofs)
{
    const std::array<Vec3, 3> zero3{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    const std::array<std::array<Vec3, 3>, 2> kZeroMoments{zero3, zero3};
    JumpSummary s;
    const auto& rule = cached_quadrature(QuadDomain::Triangle, 4);
    for (int f : mesh.interior_face_ids()) {
        const Face& face = mesh.faces()[f];
        // dof -> per-side moments
        std::map<int, std::array<std::array<Vec3, 3>, 2>> moments;
        for (int side = 0; side < 2; ++side) {
            const int t = face.tets[side];
            const auto basis = local_velocity_basis(mesh, dofs, t);
            const TetGeometry& geom = mesh.geometry(t);
            for (const auto& fn : basis) {
                moments.try_emplace(fn.dof, kZeroMoments);
            }
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const std::array<double, 3> fl{rule.points[q][0], rule.points[q][1], rule.points[q][2]};
                const auto shapes = eval_all_shapes(face_to_tet_barycentric(mesh, f, t, fl), geom);
                const double w = rule.weights[q] * face.area;
                for (const auto& fn : basis) {
                    const Vec3 v = evaluate(fn, shapes).value;
                    for (int m = 0; m < 3; ++m) {
                        moments[fn.dof][side][m] += w * fl[m] * v;
                    }
                }
            }
        }
        for (const auto& [dof, sides] : moments) {
            double scale = 1.0;
            double jump = 0.0;
            for (int m = 0; m < 3; ++m) {
                scale = std::max({scale, sides[0][m].norm() / face.area, sides[1][m].norm() / face.area});
                jump = std::max(jump, (sides[0][m] - sides[1][m]).cwiseAbs().maxCoeff());
            }
            s.max_relative_jump = std::max(s.max_relative_jump, jump / (face.area * scale));
            ++s.nonzero_pairs;
        }
    }
    s.pairs_checked = static_cast<long long>(dofs.num_velocity()) * static_cast<long long>(mesh.interior_face_ids().size());
    return s;
}

VerifyReport verify_jumps(int level)
{
    VerifyReport rep;
    rep.suite = "jumps";
    const TetMesh mesh = build_cube_mesh(level_to_n(level));
    const DofMap dofs = build_dof_map(mesh);
    const auto s = scan_jumps(mesh, dofs);
    rep.checks.push_back(make_check("p1_jump_moments_level" + std::to_string(level), s.max_relative_jump, 1e-12,
                                    std::to_string(s.pairs_checked) + " (function, face) pairs, " +
                                        std::to_string(s.nonzero_pairs) + " with support on the face"));
    return rep;
}

GramSummary gram_summary(const TetMesh& mesh, const DofMap& dofs)
{
    const Eigen::MatrixXd G =
        Eigen::MatrixXd(assemble_velocity_mass(mesh, dofs)) + Eigen::MatrixXd(assemble_stiffness(mesh, dofs));
    GramSummary s;
    s.size = static_cast<int>(G.rows());
    s.symmetric = (G - G.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * G.cwiseAbs().maxCoeff();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
    const Eigen::VectorXd d = ldlt.vectorD();
    s.min_pivot = d.minCoeff();
    s.max_pivot = d.maxCoeff();
    s.pivot_ratio = s.max_pivot > 0.0 ? s.min_pivot / s.max_pivot : 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
    s.min_eigenvalue = es.eigenvalues().minCoeff();
    return s;
}

VerifyReport verify_unisolvence(const std::vector<int>& levels)
{
    VerifyReport rep;
    rep.suite = "unisolvence";
    for (int level : levels) {
        const TetMesh mesh = build_cube_mesh(level_to_n(level));
        const DofMap dofs = build_dof_map(mesh);
        const auto s = gram_summary(mesh, dofs);
        const std::string tag = "_level" + std::to_string(level);
        CheckResult ratio{"gram_pivot_ratio" + tag, s.symmetric && s.min_pivot > 0.0 && s.pivot_ratio > 1e-10,
                          s.pivot_ratio, 1e-10,
                          std::to_string(s.size) + " basis functions; min pivot must exceed ratio threshold"};
        rep.checks.push_back(ratio);
        rep.checks.push_back({"gram_min_eigenvalue" + tag, s.min_eigenvalue > 0.0, s.min_eigenvalue, 0.0,
                              "smallest eigenvalue of the H1-broken Gram matrix must be positive"});
    }
    return rep;
}

VerifyReport verify_infsup(int max_level)
{
    VerifyReport rep;
    rep.suite = "infsup";
    InfSupConfig first;
    first.dense = true;
    const auto l1 = estimate_infsup_level(1, first);
    const double b_dense = l1.dense->beta;
    const double b_lanczos = l1.lanczos->beta;
    const double agreement = std::abs(b_dense - b_lanczos) / b_dense;
    rep.checks.push_back({"beta_level1_positive", b_dense > 0.0, b_dense, 0.0, "dense generalized eigensolve"});
    rep.checks.push_back(
        make_check("beta_level1_dense_vs_lanczos", agreement, 1e-8, "relative difference of the two estimators"));
    double last = b_lanczos;
    for (int level = 2; level <= max_level; ++level) {
        const auto est = estimate_infsup_level(level, InfSupConfig{});
        last = est.lanczos->beta;
        rep.checks.push_back({"beta_level" + std::to_string(level) + "_positive", last > 0.0, last, 0.0,
                              "Lanczos, " + std::to_string(est.lanczos->iterations) + " iterations"});
    }
    if (max_level > 1) {
        rep.checks.push_back({"beta_no_collapse", last >= 0.5 * b_dense, last / b_dense, 0.5,
                              "beta(level " + std::to_string(max_level) + ") / beta(level 1) must be >= 0.5"});
    }
    return rep;
}

VerifyReport verify(Suite suite, const VerifyOptions& options)
{
    switch (suite) {
    case Suite::Dofs:
        return verify_dofs(options.random_tets, options.seed);
    case Suite::Jumps:
        return verify_jumps(options.level.value_or(2));
    case Suite::Unisolvence:
        if (options.level) {
            return verify_unisolvence({*options.level});
        }
        return verify_unisolvence({1, 2});
    case Suite::InfSup: {
        const int level = options.level.value_or(3);
        if (level > 3) {
            throw InvalidArgument("infsup suite is limited to level <= 3");
        }
        return verify_infsup(level);
    }
    }
    throw InvalidArgument("unknown suite");
}

} // namespace p2nc
