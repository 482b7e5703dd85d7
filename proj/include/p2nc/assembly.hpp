#pragma once

#include <functional>

#include <Eigen/SparseCore>

#include "p2nc/dofmap.hpp"
#include "p2nc/mesh.hpp"

namespace p2nc {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using VectorField = std::function<Vec3(const Vec3&)>;
using ScalarField = std::function<double(const Vec3&)>;
using TensorField = std::function<Mat3(const Vec3&)>;

struct AssemblyConfig {
    int matrix_degree{4}; // stiffness, divergence, pressure-mean integrands are degree <= 2
    int load_degree{10};
};

/**
 * Discrete Stokes operators on V_h x P_h.
 *
 *   A(i,j)  = (grad_h phi_j, grad_h phi_i)
 *   B(k,j)  = (div_h phi_j, q_k)
 *   load(i) = (f, phi_i)
 *   c(k)    = int q_k
 */
struct SaddleSystem {
    SparseMatrix A;
    SparseMatrix B;
    Eigen::VectorXd load;
    Eigen::VectorXd c;

    [[nodiscard]] int num_velocity() const { return static_cast<int>(A.rows()); }
    [[nodiscard]] int num_pressure() const { return static_cast<int>(B.rows()); }
};

[[nodiscard]] SaddleSystem assemble(const TetMesh& mesh, const DofMap& dofs, const VectorField& f,
                                    const AssemblyConfig& config = {});

/// Velocity L2 Gram matrix (phi_j, phi_i).
[[nodiscard]] SparseMatrix assemble_velocity_mass(const TetMesh& mesh, const DofMap& dofs, int degree = 4);
/// Broken-gradient Gram matrix alone (same as SaddleSystem::A).
[[nodiscard]] SparseMatrix assemble_stiffness(const TetMesh& mesh, const DofMap& dofs, int degree = 4);
/// Block-diagonal P1 mass matrix of the discontinuous pressure space.
[[nodiscard]] SparseMatrix assemble_pressure_mass(const TetMesh& mesh, const DofMap& dofs);

struct ExactSolution {
    VectorField u;
    TensorField grad_u; // grad_u(r, c) = d u_r / d x_c
    ScalarField p;
};

struct ErrorReport {
    int level{0};
    double h{0.0};
    double l2_velocity{0.0};
    double h1_broken{0.0};
    double l2_pressure{0.0};
};

/**
 * Errors of a discrete pair against an exact solution with quadrature of the
 * given degree. Pressure errors are measured after removing the mean of both
 * the exact and the discrete pressure.
 */
[[nodiscard]] ErrorReport compute_errors(const TetMesh& mesh, const DofMap& dofs, const Eigen::VectorXd& u_h,
                                         const Eigen::VectorXd& p_h, const ExactSolution& exact, int degree = 10);

/// Nodal interpolation of a scalar field into the discontinuous P1 space.
[[nodiscard]] Eigen::VectorXd interpolate_pressure(const TetMesh& mesh, const DofMap& dofs, const ScalarField& p);

/// ||B u_h|| / (||B||_F ||u_h||); zero when u_h is zero.
[[nodiscard]] double divergence_residual(const SaddleSystem& system, const Eigen::VectorXd& u_h);

} // namespace p2nc
