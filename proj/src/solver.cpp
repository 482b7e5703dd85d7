#include "p2nc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <Eigen/UmfPackSupport>

namespace p2nc {

namespace {

using Triplet = Eigen::Triplet<double, int>;

// Symmetric bordered matrix [[N, s*B^T, 0], [s*B, 0, c], [0, c^T, 0]].
SparseMatrix bordered(const SparseMatrix& N, const SparseMatrix& B, const Eigen::VectorXd& c, double s)
{
    const int nu = static_cast<int>(N.rows());
    const int np = static_cast<int>(B.rows());
    const int n = nu + np + 1;
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(N.nonZeros() + 2 * B.nonZeros() + 2 * np));
    for (int k = 0; k < N.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(N, k); it; ++it) {
            trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        }
    }
    for (int k = 0; k < B.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(B, k); it; ++it) {
            const int row = nu + static_cast<int>(it.row());
            const int col = static_cast<int>(it.col());
            trips.emplace_back(row, col, s * it.value());
            trips.emplace_back(col, row, s * it.value());
        }
    }
    for (int k = 0; k < np; ++k) {
        if (c[k] != 0.0) {
            trips.emplace_back(nu + k, n - 1, c[k]);
            trips.emplace_back(n - 1, nu + k, c[k]);
        }
    }
    SparseMatrix K(n, n);
    K.setFromTriplets(trips.begin(), trips.end());
    K.makeCompressed();
    return K;
}

void require_spd(const Eigen::MatrixXd& m, const char* what)
{
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw MatrixError(std::string(what) + " is not symmetric positive definite");
    }
}

} // namespace

struct DirectSolver::Impl {
    Backend backend;
    std::unique_ptr<Eigen::UmfPackLU<SparseMatrix>> umfpack;
    std::unique_ptr<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>> lu_colamd;
    std::unique_ptr<Eigen::SparseLU<SparseMatrix, Eigen::AMDOrdering<int>>> lu_amd;
};

DirectSolver::DirectSolver(const SparseMatrix& matrix, Backend backend, Ordering ordering)
    : impl_(std::make_unique<Impl>())
{
    if (matrix.rows() != matrix.cols()) {
        throw InvalidArgument("DirectSolver: matrix is not square");
    }
    impl_->backend = backend;
    auto check = [](bool ok, const std::string& what) {
        if (!ok) {
            throw SolverError("sparse LU factorization failed (" + what + ")");
        }
    };
    if (backend == Backend::Umfpack) {
        if (ordering == Ordering::Colamd) {
            throw InvalidArgument("DirectSolver: UMFPACK backend supports Metis or Amd ordering");
        }
        auto& lu = impl_->umfpack;
        lu = std::make_unique<Eigen::UmfPackLU<SparseMatrix>>();
        // The saddle matrix has a symmetric pattern; AMD/METIS on A + A^T beats COLAMD by a wide margin.
        lu->umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
        lu->umfpackControl()(UMFPACK_ORDERING) =
            ordering == Ordering::Metis ? UMFPACK_ORDERING_METIS : UMFPACK_ORDERING_AMD;
        lu->compute(matrix);
        check(lu->info() == Eigen::Success, "umfpack");
    } else if (ordering == Ordering::Amd) {
        auto& lu = impl_->lu_amd;
        lu = std::make_unique<Eigen::SparseLU<SparseMatrix, Eigen::AMDOrdering<int>>>();
        lu->compute(matrix);
        check(lu->info() == Eigen::Success, lu->lastErrorMessage());
    } else if (ordering == Ordering::Colamd) {
        auto& lu = impl_->lu_colamd;
        lu = std::make_unique<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>>();
        lu->compute(matrix);
        check(lu->info() == Eigen::Success, lu->lastErrorMessage());
    } else {
        throw InvalidArgument("DirectSolver: Eigen LU backend supports Amd or Colamd ordering");
    }
}

DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

Eigen::VectorXd DirectSolver::solve(const Eigen::VectorXd& rhs) const
{
    Eigen::VectorXd x;
    if (impl_->umfpack) {
        x = impl_->umfpack->solve(rhs);
    } else if (impl_->lu_amd) {
        x = impl_->lu_amd->solve(rhs);
    } else {
        x = impl_->lu_colamd->solve(rhs);
    }
    if (!x.allFinite()) {
        throw SolverError("sparse LU produced a non-finite solution");
    }
    return x;
}

std::string to_string(Backend backend, Ordering ordering)
{
    const std::string b = backend == Backend::Umfpack ? "umfpack" : "eigen-lu";
    switch (ordering) {
    case Ordering::Metis:
        return b + "/metis";
    case Ordering::Amd:
        return b + "/amd";
    case Ordering::Colamd:
        return b + "/colamd";
    }
    return b;
}

Solution solve_stokes(const SaddleSystem& system, const SolverOptions& options)
{
    const int nu = system.num_velocity();
    const int np = system.num_pressure();
    if (nu == 0) {
        throw InvalidArgument("solve_stokes: the velocity space is empty");
    }
    if (system.B.cols() != nu || system.load.size() != nu || system.c.size() != np) {
        throw InvalidArgument("solve_stokes: inconsistent block sizes");
    }

    const SparseMatrix K = bordered(system.A, system.B, system.c, -1.0);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(K.rows());
    rhs.head(nu) = system.load;

    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::VectorXd x = DirectSolver(K, options.backend, options.ordering).solve(rhs);
    const auto t1 = std::chrono::steady_clock::now();

    Solution sol;
    sol.u = x.head(nu);
    sol.p = x.segment(nu, np);
    sol.multiplier = x[nu + np];

    auto& st = sol.stats;
    st.num_unknowns = static_cast<int>(K.rows());
    st.nonzeros = K.nonZeros();
    st.factor_seconds = std::chrono::duration<double>(t1 - t0).count();
    st.factorization = to_string(options.backend, options.ordering);

    const Eigen::VectorXd au = system.A * sol.u;
    const Eigen::VectorXd mom = au - system.B.transpose() * sol.p - system.load;
    const double mom_scale = std::max({system.load.norm(), au.norm(), std::numeric_limits<double>::min()});
    st.momentum_residual = (system.load.norm() == 0.0 && sol.u.norm() == 0.0 && sol.p.norm() == 0.0)
                               ? 0.0
                               : mom.norm() / mom_scale;
    st.divergence_residual = divergence_residual(system, sol.u);
    const double pn = sol.p.norm();
    st.mean_residual = pn == 0.0 ? 0.0 : std::abs(system.c.dot(sol.p)) / (system.c.norm() * pn);

    if (!(st.momentum_residual <= options.residual_tolerance) ||
        !(st.divergence_residual <= options.residual_tolerance) || !(st.mean_residual <= 1e-10)) {
        throw SolverError("saddle-point residuals too large: momentum " + std::to_string(st.momentum_residual) +
                          ", divergence " + std::to_string(st.divergence_residual) + ", mean " +
                          std::to_string(st.mean_residual));
    }
    return sol;
}

InfSupEstimate estimate_infsup_dense(const SparseMatrix& norm, const SparseMatrix& B,
                                     const SparseMatrix& pressure_mass, const Eigen::VectorXd& c)
{
    const Eigen::MatrixXd N = Eigen::MatrixXd(norm);
    const Eigen::MatrixXd Mp = Eigen::MatrixXd(pressure_mass);
    const Eigen::MatrixXd Bd = Eigen::MatrixXd(B);
    Eigen::LLT<Eigen::MatrixXd> nllt(N);
    if (nllt.info() != Eigen::Success) {
        throw MatrixError("velocity norm matrix is not symmetric positive definite");
    }
    require_spd(Mp, "pressure mass matrix");

    const Eigen::MatrixXd S = Bd * nllt.solve(Bd.transpose());
    const auto np = static_cast<int>(c.size());

    // Orthonormal basis of the c-orthogonal (mean-zero) subspace.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(c);
    const Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd Z = Q.rightCols(np - 1);
    Eigen::MatrixXd Sz = Z.transpose() * S * Z;
    Eigen::MatrixXd Mz = Z.transpose() * Mp * Z;
    Sz = 0.5 * (Sz + Sz.transpose()).eval();
    Mz = 0.5 * (Mz + Mz.transpose()).eval();

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Sz, Mz, Eigen::EigenvaluesOnly);
    if (ges.info() != Eigen::Success) {
        throw MatrixError("generalized eigensolve failed");
    }
    InfSupEstimate est;
    est.method = "dense";
    est.beta_squared = std::max(0.0, ges.eigenvalues().minCoeff());
    est.beta = std::sqrt(est.beta_squared);
    est.iterations = 1;
    return est;
}

InfSupEstimate estimate_infsup_lanczos(const SparseMatrix& norm, const SparseMatrix& B,
                                       const SparseMatrix& pressure_mass, const Eigen::VectorXd& c,
                                       double tolerance, int max_iterations)
{
    const int nu = static_cast<int>(norm.rows());
    const int np = static_cast<int>(B.rows());
    {
        Eigen::SimplicialLDLT<SparseMatrix> check(norm);
        if (check.info() != Eigen::Success || (check.vectorD().array() <= 0.0).any()) {
            throw MatrixError("velocity norm matrix is not symmetric positive definite");
        }
        Eigen::SimplicialLDLT<SparseMatrix> mcheck(pressure_mass);
        if (mcheck.info() != Eigen::Success || (mcheck.vectorD().array() <= 0.0).any()) {
            throw MatrixError("pressure mass matrix is not symmetric positive definite");
        }
    }

    // Solving the bordered system with rhs (0, y, 0) yields x = -S^+ y on mean-zero data.
    const SparseMatrix K = bordered(norm, B, c, 1.0);
    const DirectSolver lu(K);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(np);
    const double ones_m = ones.dot(c); // 1^T Mp 1

    auto mdot = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(pressure_mass * b); };
    auto deflate = [&](Eigen::VectorXd& v) { v -= (c.dot(v) / ones_m) * ones; };
    auto apply = [&](const Eigen::VectorXd& z) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu + np + 1);
        rhs.segment(nu, np) = pressure_mass * z;
        const Eigen::VectorXd sol = lu.solve(rhs);
        Eigen::VectorXd out = -sol.segment(nu, np);
        deflate(out);
        return out;
    };

    std::mt19937_64 rng(20240101ULL);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd q(np);
    for (int i = 0; i < np; ++i) {
        q[i] = dist(rng);
    }
    deflate(q);
    q /= std::sqrt(mdot(q, q));

    const int kmax = std::min(max_iterations, np - 1);
    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha;
    std::vector<double> beta;
    basis.push_back(q);

    InfSupEstimate est;
    est.method = "lanczos";
    double theta = 0.0;
    for (int j = 0; j < kmax; ++j) {
        Eigen::VectorXd w = apply(basis[j]);
        alpha.push_back(mdot(basis[j], w));
        // Full reorthogonalization (twice) in the Mp inner product.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& v : basis) {
                w -= mdot(v, w) * v;
            }
        }
        deflate(w);
        const double b = std::sqrt(std::max(0.0, mdot(w, w)));

        const auto m = static_cast<int>(alpha.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < m) {
                T(i, i + 1) = beta[i];
                T(i + 1, i) = beta[i];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        const int top = m - 1;
        theta = es.eigenvalues()(top);
        const double ritz_residual = std::abs(b * es.eigenvectors()(m - 1, top));
        est.iterations = m;
        est.residual = theta > 0.0 ? ritz_residual / theta : ritz_residual;

        if (b <= 1e-14 * std::abs(theta) || est.residual <= tolerance) {
            break;
        }
        beta.push_back(b);
        basis.push_back(w / b);
    }

    if (!(theta > 0.0)) {
        est.beta_squared = 0.0;
        est.beta = 0.0;
        return est;
    }
    est.beta_squared = 1.0 / theta;
    est.beta = std::sqrt(est.beta_squared);
    return est;
}

} // namespace p2nc
