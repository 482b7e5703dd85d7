#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "p2nc/assembly.hpp"
#include "p2nc/solver.hpp"

namespace p2nc {

/// Grid level -> cells per cube edge (h halves per level).
[[nodiscard]] int level_to_n(int level);

struct ConvergenceConfig {
    int load_degree{10};
    int error_degree{10};
    int level_cap{4};
    bool with_infsup{false}; // also estimate beta_h per level (levels <= 3)
    bool seminorm_infsup{false};
};

struct LevelResult {
    int level{0};
    int n{0};
    int num_velocity{0};
    int num_pressure{0};
    ErrorReport errors;
    // Rates against the previous level; empty on the first row.
    std::optional<double> rate_l2_velocity;
    std::optional<double> rate_h1_broken;
    std::optional<double> rate_l2_pressure;
    SolverStats solver;
    std::optional<double> beta;
    double seconds{0.0};
};

struct ConvergenceTable {
    std::vector<LevelResult> rows;
};

/// Solve the manufactured problem on one level and report its errors.
[[nodiscard]] LevelResult solve_level(int level, const ConvergenceConfig& config = {});

[[nodiscard]] ConvergenceTable run_convergence(int max_level, const ConvergenceConfig& config = {});

[[nodiscard]] double observed_rate(double coarse_error, double fine_error);

void write_csv(const ConvergenceTable& table, const std::filesystem::path& path);
[[nodiscard]] std::string to_csv(const ConvergenceTable& table);
[[nodiscard]] nlohmann::json to_json(const LevelResult& row);
[[nodiscard]] nlohmann::json to_json(const ConvergenceTable& table);
/// Fixed-width text rendering in the layout of a classic error/rate table.
[[nodiscard]] std::string format_table(const ConvergenceTable& table);

struct InfSupConfig {
    bool seminorm{false};
    bool dense{false};
    bool lanczos{true};
};

struct InfSupLevel {
    int level{0};
    std::optional<InfSupEstimate> dense;
    std::optional<InfSupEstimate> lanczos;
};

[[nodiscard]] InfSupLevel estimate_infsup_level(int level, const InfSupConfig& config);

// Verification suites ---------------------------------------------------------

struct CheckResult {
    std::string name;
    bool passed{false};
    double value{0.0};
    double tolerance{0.0};
    std::string detail;
};

struct VerifyReport {
    std::string suite;
    std::vector<CheckResult> checks;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

enum class Suite { Dofs, Jumps, Unisolvence, InfSup };

[[nodiscard]] Suite parse_suite(const std::string& name);
[[nodiscard]] std::string suite_name(Suite suite);

struct VerifyOptions {
    std::optional<int> level; // suite-specific default when empty
    int random_tets{50};
    unsigned seed{12345};
};

[[nodiscard]] VerifyReport verify(Suite suite, const VerifyOptions& options = {});

/// Individual suites, also used by the acceptance tests.
[[nodiscard]] VerifyReport verify_dofs(int num_tets, unsigned seed);
[[nodiscard]] VerifyReport verify_jumps(int level);
[[nodiscard]] VerifyReport verify_unisolvence(const std::vector<int>& levels);
[[nodiscard]] VerifyReport verify_infsup(int max_level);

/// Random tetrahedron with bounded aspect ratio, positively oriented.
[[nodiscard]] std::array<Vec3, 4> random_tet(std::mt19937_64& rng);

/// Largest normalized jump moment max |int_F [phi] lambda_m| / (|F| scale) over
/// all velocity basis functions and interior faces of the mesh.
struct JumpSummary {
    double max_relative_jump{0.0};
    long long pairs_checked{0};
    long long nonzero_pairs{0};
};
[[nodiscard]] JumpSummary scan_jumps(const TetMesh& mesh, const DofMap& dofs);

struct GramSummary {
    int size{0};
    double min_pivot{0.0};
    double max_pivot{0.0};
    double pivot_ratio{0.0};
    double min_eigenvalue{0.0};
    bool symmetric{false};
};
/// Pivoted LDL^T of the H1-broken Gram matrix of all velocity basis functions.
[[nodiscard]] GramSummary gram_summary(const TetMesh& mesh, const DofMap& dofs);

} // namespace p2nc
