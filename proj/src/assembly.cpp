#include "p2nc/assembly.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "p2nc/quadrature.hpp"

namespace p2nc {

namespace {

using Triplet = Eigen::Triplet<double, int>;

struct ElementValues {
    std::vector<LocalVelocityFunction> basis;
    // values[q][a]
    std::vector<std::vector<VectorShapeValue>> values;
    std::vector<BarycentricPoint> points;
    std::vector<double> weights; // already scaled by |T|
};

ElementValues tabulate(const TetMesh& mesh, const DofMap& dofs, int t, const QuadratureRule& rule)
{
    ElementValues ev;
    ev.basis = local_velocity_basis(mesh, dofs, t);
    const TetGeometry& geom = mesh.geometry(t);
    ev.values.resize(rule.size());
    ev.points = rule.points;
    ev.weights.resize(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto shapes = eval_all_shapes(rule.points[q], geom);
        ev.values[q].reserve(ev.basis.size());
        for (const auto& fn : ev.basis) {
            ev.values[q].push_back(evaluate(fn, shapes));
        }
        ev.weights[q] = rule.weights[q] * geom.volume;
    }
    return ev;
}

SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& trips)
{
    SparseMatrix m(rows, cols);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

template <typename Integrand>
SparseMatrix assemble_velocity_bilinear(const TetMesh& mesh, const DofMap& dofs, int degree, Integrand&& integrand)
{
    const auto& rule = cached_quadrature(QuadDomain::Tet, degree);
    std::vector<Triplet> trips;
    const int nu = dofs.num_velocity();
    for (int t = 0; t < static_cast<int>(mesh.num_tets()); ++t) {
        const auto ev = tabulate(mesh, dofs, t, rule);
        const auto nb = ev.basis.size();
        for (std::size_t a = 0; a < nb; ++a) {
            for (std::size_t b = a; b < nb; ++b) {
                double s = 0.0;
                for (std::size_t q = 0; q < rule.size(); ++q) {
                    s += ev.weights[q] * integrand(ev.values[q][a], ev.values[q][b]);
                }
                trips.emplace_back(ev.basis[a].dof, ev.basis[b].dof, s);
                if (a != b) {
                    trips.emplace_back(ev.basis[b].dof, ev.basis[a].dof, s);
                }
            }
        }
    }
    return from_triplets(nu, nu, trips);
}

double grad_inner(const VectorShapeValue& x, const VectorShapeValue& y)
{
    return x.grad.cwiseProduct(y.grad).sum();
}

} // namespace

SaddleSystem assemble(const TetMesh& mesh, const DofMap& dofs, const VectorField& f, const AssemblyConfig& config)
{
    if (!f) {
        throw InvalidArgument("assemble: body force is empty");
    }
    const auto& mrule = cached_quadrature(QuadDomain::Tet, config.matrix_degree);
    const auto& lrule = cached_quadrature(QuadDomain::Tet, config.load_degree);

    const int nu = dofs.num_velocity();
    const int np = dofs.num_pressure();
    std::vector<Triplet> a_trips;
    std::vector<Triplet> b_trips;
    SaddleSystem sys;
    sys.load = Eigen::VectorXd::Zero(nu);
    sys.c = Eigen::VectorXd::Zero(np);

    for (int t = 0; t < static_cast<int>(mesh.num_tets()); ++t) {
        const TetGeometry& geom = mesh.geometry(t);
        const auto ev = tabulate(mesh, dofs, t, mrule);
        const auto nb = ev.basis.size();

        for (std::size_t a = 0; a < nb; ++a) {
            for (std::size_t b = a; b < nb; ++b) {
                double s = 0.0;
                for (std::size_t q = 0; q < mrule.size(); ++q) {
                    s += ev.weights[q] * grad_inner(ev.values[q][a], ev.values[q][b]);
                }
                a_trips.emplace_back(ev.basis[a].dof, ev.basis[b].dof, s);
                if (a != b) {
                    a_trips.emplace_back(ev.basis[b].dof, ev.basis[a].dof, s);
                }
            }
        }

        for (int k = 0; k < 4; ++k) {
            const int pd = dofs.pressure_dof(t, k);
            for (std::size_t a = 0; a < nb; ++a) {
                double s = 0.0;
                for (std::size_t q = 0; q < mrule.size(); ++q) {
                    s += ev.weights[q] * ev.points[q][k] * ev.values[q][a].divergence();
                }
                b_trips.emplace_back(pd, ev.basis[a].dof, s);
            }
            sys.c[pd] = geom.volume / 4.0;
        }

        // Load with the (higher-degree) load rule.
        for (std::size_t q = 0; q < lrule.size(); ++q) {
            const auto shapes = eval_all_shapes(lrule.points[q], geom);
            const Vec3 fq = f(geom.point(lrule.points[q]));
            const double w = lrule.weights[q] * geom.volume;
            for (const auto& fn : ev.basis) {
                sys.load[fn.dof] += w * shapes[fn.shape].value * fn.direction.dot(fq);
            }
        }
    }

    sys.A = from_triplets(nu, nu, a_trips);
    sys.B = from_triplets(np, nu, b_trips);
    return sys;
}

SparseMatrix assemble_velocity_mass(const TetMesh& mesh, const DofMap& dofs, int degree)
{
    return assemble_velocity_bilinear(mesh, dofs, degree, [](const VectorShapeValue& x, const VectorShapeValue& y) {
        return x.value.dot(y.value);
    });
}

SparseMatrix assemble_stiffness(const TetMesh& mesh, const DofMap& dofs, int degree)
{
    return assemble_velocity_bilinear(mesh, dofs, degree, grad_inner);
}

SparseMatrix assemble_pressure_mass(const TetMesh& mesh, const DofMap& dofs)
{
    std::vector<Triplet> trips;
    trips.reserve(16 * mesh.num_tets());
    for (int t = 0; t < static_cast<int>(mesh.num_tets()); ++t) {
        const double vol = mesh.geometry(t).volume;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                trips.emplace_back(dofs.pressure_dof(t, i), dofs.pressure_dof(t, j), vol * (i == j ? 2.0 : 1.0) / 20.0);
            }
        }
    }
    return from_triplets(dofs.num_pressure(), dofs.num_pressure(), trips);
}

Eigen::VectorXd interpolate_pressure(const TetMesh& mesh, const DofMap& dofs, const ScalarField& p)
{
    Eigen::VectorXd out(dofs.num_pressure());
    for (int t = 0; t < static_cast<int>(mesh.num_tets()); ++t) {
        const auto& tv = mesh.tets()[t];
        for (int i = 0; i < 4; ++i) {
            out[dofs.pressure_dof(t, i)] = p(mesh.vertices()[tv[i]]);
        }
    }
    return out;
}

ErrorReport compute_errors(const TetMesh& mesh, const DofMap& dofs, const Eigen::VectorXd& u_h,
                           const Eigen::VectorXd& p_h, const ExactSolution& exact, int degree)
{
    if (u_h.size() != dofs.num_velocity()) {
        throw InvalidArgument("compute_errors: velocity vector has size " + std::to_string(u_h.size()) + ", expected " +
                              std::to_string(dofs.num_velocity()));
    }
    if (p_h.size() != dofs.num_pressure()) {
        throw InvalidArgument("compute_errors: pressure vector has size " + std::to_string(p_h.size()) +
                              ", expected " + std::to_string(dofs.num_pressure()));
    }
    const auto& rule = cached_quadrature(QuadDomain::Tet, degree);
    const auto nt = static_cast<int>(mesh.num_tets());

    // Means of both pressures.
    double p_mean = 0.0;
    double ph_mean = 0.0;
    double volume = 0.0;
    for (int t = 0; t < nt; ++t) {
        const TetGeometry& geom = mesh.geometry(t);
        volume += geom.volume;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            p_mean += rule.weights[q] * geom.volume * exact.p(geom.point(rule.points[q]));
        }
        for (int i = 0; i < 4; ++i) {
            ph_mean += 0.25 * geom.volume * p_h[dofs.pressure_dof(t, i)];
        }
    }
    p_mean /= volume;
    ph_mean /= volume;

    double eu = 0.0;
    double egu = 0.0;
    double ep = 0.0;
    for (int t = 0; t < nt; ++t) {
        const TetGeometry& geom = mesh.geometry(t);
        const auto basis = local_velocity_basis(mesh, dofs, t);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto& l = rule.points[q];
            const auto shapes = eval_all_shapes(l, geom);
            Vec3 uh = Vec3::Zero();
            Mat3 guh = Mat3::Zero();
            for (const auto& fn : basis) {
                const double coef = u_h[fn.dof];
                if (coef != 0.0) {
                    const auto v = evaluate(fn, shapes);
                    uh += coef * v.value;
                    guh += coef * v.grad;
                }
            }
            double ph = 0.0;
            for (int i = 0; i < 4; ++i) {
                ph += l[i] * p_h[dofs.pressure_dof(t, i)];
            }
            const Vec3 x = geom.point(l);
            const double w = rule.weights[q] * geom.volume;
            eu += w * (exact.u(x) - uh).squaredNorm();
            egu += w * (exact.grad_u(x) - guh).squaredNorm();
            const double dp = (exact.p(x) - p_mean) - (ph - ph_mean);
            ep += w * dp * dp;
        }
    }
    ErrorReport r;
    r.h = mesh.h();
    r.l2_velocity = std::sqrt(eu);
    r.h1_broken = std::sqrt(egu);
    r.l2_pressure = std::sqrt(ep);
    return r;
}

double divergence_residual(const SaddleSystem& system, const Eigen::VectorXd& u_h)
{
    if (u_h.size() != system.B.cols()) {
        throw InvalidArgument("divergence_residual: size mismatch");
    }
    const double un = u_h.norm();
    const double bn = system.B.norm();
    if (un == 0.0 || bn == 0.0) {
        return 0.0;
    }
    return (system.B * u_h).norm() / (bn * un);
}

} // namespace p2nc
