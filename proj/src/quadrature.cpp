#include "p2nc/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <Eigen/Eigenvalues>

#include "p2nc/types.hpp"

namespace p2nc {

GaussJacobi gauss_jacobi01(int num_points, int alpha)
{
    if (num_points < 1) {
        throw InvalidArgument("gauss_jacobi01: need at least one point");
    }
    // Golub-Welsch on the Jacobi matrix for weight (1-x)^alpha (1+x)^0 on [-1,1].
    const double a = alpha;
    const double b = 0.0;
    const int n = num_points;
    Eigen::MatrixXd jm = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + a + b;
        jm(k, k) = k == 0 ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
        if (k + 1 < n) {
            const double kk = k + 1.0;
            const double s1 = 2.0 * kk + a + b;
            const double off = std::sqrt(4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) /
                                         (s1 * s1 * (s1 + 1.0) * (s1 - 1.0)));
            jm(k, k + 1) = off;
            jm(k + 1, k) = off;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jm);
    // Total mass of (1-x)^alpha over [-1,1] is 2^(alpha+1)/(alpha+1).
    const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);

    GaussJacobi gj;
    gj.nodes.resize(n);
    gj.weights.resize(n);
    // Map x in [-1,1] to t = (1+x)/2; (1-x)^alpha dx = 2^(alpha+1) (1-t)^alpha dt.
    const double scale = std::pow(2.0, a + 1.0);
    for (int k = 0; k < n; ++k) {
        const double v0 = es.eigenvectors()(0, k);
        gj.nodes[k] = 0.5 * (1.0 + es.eigenvalues()(k));
        gj.weights[k] = mu0 * v0 * v0 / scale;
    }
    return gj;
}

QuadratureRule quadrature(QuadDomain domain, int degree)
{
    if (degree < 0 || degree > kMaxQuadratureDegree) {
        throw InvalidArgument("quadrature: unsupported degree " + std::to_string(degree) + " (supported 0.." +
                              std::to_string(kMaxQuadratureDegree) + ")");
    }
    const int n = degree / 2 + 1; // 2n - 1 >= degree
    QuadratureRule rule;
    rule.domain = domain;
    rule.degree = degree;

    if (domain == QuadDomain::Tet) {
        // x = u, y = v(1-u), z = w(1-u)(1-v); Jacobian (1-u)^2 (1-v).
        const auto gu = gauss_jacobi01(n, 2);
        const auto gv = gauss_jacobi01(n, 1);
        const auto gw = gauss_jacobi01(n, 0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < n; ++k) {
                    const double u = gu.nodes[i];
                    const double v = gv.nodes[j];
                    const double w = gw.nodes[k];
                    const double x = u;
                    const double y = v * (1.0 - u);
                    const double z = w * (1.0 - u) * (1.0 - v);
                    rule.points.push_back({1.0 - x - y - z, x, y, z});
                    rule.weights.push_back(6.0 * gu.weights[i] * gv.weights[j] * gw.weights[k]);
                }
            }
        }
    } else {
        // x = u, y = v(1-u); Jacobian (1-u).
        const auto gu = gauss_jacobi01(n, 1);
        const auto gv = gauss_jacobi01(n, 0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double x = gu.nodes[i];
                const double y = gv.nodes[j] * (1.0 - x);
                rule.points.push_back({1.0 - x - y, x, y, 0.0});
                rule.weights.push_back(2.0 * gu.weights[i] * gv.weights[j]);
            }
        }
    }
    return rule;
}

const QuadratureRule& cached_quadrature(QuadDomain domain, int degree)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<QuadratureRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{static_cast<int>(domain), degree}];
    if (!slot) {
        slot = std::make_unique<QuadratureRule>(quadrature(domain, degree));
    }
    return *slot;
}

} // namespace p2nc
