#include "p2nc/manufactured.hpp"

namespace p2nc {

double bump_derivative(int order, double t)
{
    switch (order) {
    case 0:
        return t * t * (1.0 - t) * (1.0 - t);
    case 1:
        return 2.0 * t - 6.0 * t * t + 4.0 * t * t * t;
    case 2:
        return 2.0 - 12.0 * t + 12.0 * t * t;
    case 3:
        return -12.0 + 24.0 * t;
    case 4:
        return 24.0;
    default:
        return 0.0;
    }
}

namespace {

// Mixed partial d^(i+j+k) g / dx^i dy^j dz^k.
double G(int i, int j, int k, const Vec3& x)
{
    return 4096.0 * bump_derivative(i, x[0]) * bump_derivative(j, x[1]) * bump_derivative(k, x[2]);
}

} // namespace

ManufacturedProblem manufactured()
{
    ManufacturedProblem mp;
    mp.u = [](const Vec3& x) -> Vec3 {
        const double gx = G(1, 0, 0, x);
        return Vec3(G(0, 1, 0, x) - G(0, 0, 1, x), -gx, gx);
    };
    mp.grad_u = [](const Vec3& x) -> Mat3 {
        Mat3 g;
        g(0, 0) = G(1, 1, 0, x) - G(1, 0, 1, x);
        g(0, 1) = G(0, 2, 0, x) - G(0, 1, 1, x);
        g(0, 2) = G(0, 1, 1, x) - G(0, 0, 2, x);
        g(1, 0) = -G(2, 0, 0, x);
        g(1, 1) = -G(1, 1, 0, x);
        g(1, 2) = -G(1, 0, 1, x);
        g.row(2) = -g.row(1);
        return g;
    };
    mp.p = [](const Vec3& x) { return G(1, 1, 0, x) / 9.0; };
    mp.grad_p = [](const Vec3& x) -> Vec3 { return Vec3(G(2, 1, 0, x), G(1, 2, 0, x), G(1, 1, 1, x)) / 9.0; };
    mp.f = [gp = mp.grad_p](const Vec3& x) -> Vec3 {
        const double lap0 = G(2, 1, 0, x) + G(0, 3, 0, x) + G(0, 1, 2, x) - G(2, 0, 1, x) - G(0, 2, 1, x) - G(0, 0, 3, x);
        const double lap1 = -(G(3, 0, 0, x) + G(1, 2, 0, x) + G(1, 0, 2, x));
        return Vec3(-lap0, -lap1, lap1) + gp(x);
    };
    return mp;
}

} // namespace p2nc
