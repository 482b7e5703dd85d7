#include <gtest/gtest.h>

#include <random>

#include "p2nc/manufactured.hpp"
#include "p2nc/quadrature.hpp"

namespace p2nc {
namespace {

std::vector<Vec3> random_points(int count, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec3> pts(count);
    for (auto& p : pts) {
        p = Vec3(u(rng), u(rng), u(rng));
    }
    return pts;
}

// Fourth-order central difference of a field along axis d.
template <class F>
auto fd4(const F& f, const Vec3& x, int d, double h)
{
    Vec3 e = Vec3::Zero();
    e[d] = h;
    return ((f(x - 2 * e) - 8.0 * f(x - e) + 8.0 * f(x + e) - f(x + 2 * e)) / (12.0 * h)).eval();
}

TEST(Bump, Derivatives)
{
    const double t = 0.3;
    EXPECT_NEAR(bump_derivative(0, t), t * t * (1 - t) * (1 - t), 1e-16);
    EXPECT_NEAR(bump_derivative(4, t), 24.0, 1e-13);
    EXPECT_EQ(bump_derivative(5, t), 0.0);
    const double h = 1e-5;
    for (int k = 0; k < 4; ++k) {
        const double fd = (bump_derivative(k, t + h) - bump_derivative(k, t - h)) / (2 * h);
        EXPECT_NEAR(fd, bump_derivative(k + 1, t), 1e-8);
    }
}

TEST(Manufactured, DivergenceFree)
{
    const auto mp = manufactured();
    for (const Vec3& x : random_points(100, 1)) {
        const Mat3 g = mp.grad_u(x);
        EXPECT_LE(std::abs(g.trace()), 1e-12 * std::max(1.0, g.norm()));
    }
}

TEST(Manufactured, ZeroOnBoundary)
{
    const auto mp = manufactured();
    for (const Vec3& x : random_points(100, 2)) {
        for (int d = 0; d < 3; ++d) {
            for (double side : {0.0, 1.0}) {
                Vec3 y = x;
                y[d] = side;
                EXPECT_EQ(mp.u(y).norm(), 0.0);
            }
        }
    }
}

TEST(Manufactured, PressureHasZeroMean)
{
    const auto mp = manufactured();
    const TetMesh mesh = build_cube_mesh(2);
    const auto& rule = quadrature(QuadDomain::Tet, 14);
    double mean = 0.0;
    double l1 = 0.0;
    for (int t = 0; t < static_cast<int>(mesh.num_tets()); ++t) {
        const auto& g = mesh.geometry(t);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double v = mp.p(g.point(rule.points[q]));
            mean += g.volume * rule.weights[q] * v;
            l1 += g.volume * rule.weights[q] * std::abs(v);
        }
    }
    EXPECT_GT(l1, 0.1);
    EXPECT_LE(std::abs(mean), 1e-13 * l1);
}

TEST(Manufactured, GradientsMatchFiniteDifferences)
{
    const auto mp = manufactured();
    const double h = 1e-3;
    for (const Vec3& x : random_points(100, 3)) {
        const Mat3 g = mp.grad_u(x);
        const Vec3 gp = mp.grad_p(x);
        for (int d = 0; d < 3; ++d) {
            const Vec3 du = fd4(mp.u, x, d, h);
            EXPECT_LE((du - g.col(d)).norm(), 1e-6 * std::max(1.0, g.norm()));
            const double dp = fd4([&](const Vec3& y) { return Eigen::Matrix<double, 1, 1>(mp.p(y)); }, x, d, h)(0);
            EXPECT_LE(std::abs(dp - gp[d]), 1e-6 * std::max(1.0, gp.norm()));
        }
    }
}

TEST(Manufactured, ForceMatchesFiniteDifferenceOracle)
{
    // f = -div(grad u) + grad p, with the divergence taken by differences of grad_u.
    const auto mp = manufactured();
    const double h = 1e-3;
    for (const Vec3& x : random_points(100, 4)) {
        Vec3 lap = Vec3::Zero();
        for (int d = 0; d < 3; ++d) {
            lap += fd4([&](const Vec3& y) -> Vec3 { return mp.grad_u(y).col(d); }, x, d, h);
        }
        Vec3 gp;
        for (int d = 0; d < 3; ++d) {
            gp[d] = fd4([&](const Vec3& y) { return Eigen::Matrix<double, 1, 1>(mp.p(y)); }, x, d, h)(0);
        }
        const Vec3 oracle = -lap + gp;
        const Vec3 f = mp.f(x);
        EXPECT_LE((oracle - f).norm(), 1e-6 * std::max(1.0, f.norm())) << x.transpose();
    }
}

} // namespace
} // namespace p2nc
