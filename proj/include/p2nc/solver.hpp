#pragma once

#include <memory>
#include <string>

#include <Eigen/Core>

#include "p2nc/assembly.hpp"

namespace p2nc {

/// Sparse direct backends: UMFPACK (symmetric strategy) or Eigen's supernodal LU.
enum class Backend { Umfpack, EigenLU };
/// Fill-reducing ordering. Umfpack accepts Metis or Amd, EigenLU accepts Amd or Colamd.
enum class Ordering { Metis, Amd, Colamd };

struct SolverOptions {
    Backend backend{Backend::Umfpack};
    Ordering ordering{Ordering::Metis};
    double residual_tolerance{1e-9};
};

/// Sparse LU of a square matrix; throws SolverError on a singular factorization.
class DirectSolver {
public:
    DirectSolver(const SparseMatrix& matrix, Backend backend = Backend::Umfpack, Ordering ordering = Ordering::Metis);
    ~DirectSolver();
    DirectSolver(DirectSolver&&) noexcept;
    DirectSolver& operator=(DirectSolver&&) noexcept;

    [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

[[nodiscard]] std::string to_string(Backend backend, Ordering ordering);

struct SolverStats {
    int num_unknowns{0};
    long long nonzeros{0};
    double momentum_residual{0.0};   // ||A u - B^T p - load|| / max(||load||, ||A u||)
    double divergence_residual{0.0}; // ||B u|| / (||B|| ||u||)
    double mean_residual{0.0};       // |c^T p| / (||c|| ||p||)
    double factor_seconds{0.0};
    std::string factorization;
};

struct Solution {
    Eigen::VectorXd u;
    Eigen::VectorXd p;
    double multiplier{0.0};
    SolverStats stats;
};

/**
 * Direct solve of the augmented saddle-point system
 *
 *   [ A   -B^T  0 ] [u]   [load]
 *   [-B    0    c ] [p] = [ 0  ]
 *   [ 0   c^T   0 ] [mu]  [ 0  ]
 *
 * which is symmetric; the last row pins the pressure mean to zero. Throws
 * SolverError when the factorization is singular or the residuals exceed the
 * configured tolerance, and InvalidArgument for an empty velocity space.
 */
[[nodiscard]] Solution solve_stokes(const SaddleSystem& system, const SolverOptions& options = {});

struct InfSupEstimate {
    int level{0};
    double beta{0.0};
    double beta_squared{0.0};
    std::string method;
    int iterations{0};
    double residual{0.0}; // Ritz residual estimate (iterative) or 0 (dense)
};

/// beta_h^2 = min over mean-zero p of p^T B N^-1 B^T p / p^T Mp p, dense generalized eigensolve.
[[nodiscard]] InfSupEstimate estimate_infsup_dense(const SparseMatrix& norm, const SparseMatrix& B,
                                                   const SparseMatrix& pressure_mass, const Eigen::VectorXd& c);

/// Same quantity by Lanczos on (B N^-1 B^T)^+ Mp in the Mp inner product,
/// with the constant pressure deflated.
[[nodiscard]] InfSupEstimate estimate_infsup_lanczos(const SparseMatrix& norm, const SparseMatrix& B,
                                                     const SparseMatrix& pressure_mass, const Eigen::VectorXd& c,
                                                     double tolerance = 1e-13, int max_iterations = 400);

} // namespace p2nc
