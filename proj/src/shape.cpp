#include "p2nc/shape.hpp"

#include <string>

namespace p2nc {

namespace {

// Compose d/d(lambda_k) with the constant barycentric gradients.
Vec3 chain(const std::array<double, 4>& dlambda, const TetGeometry& geom)
{
    return dlambda[0] * geom.grad_lambda[0] + dlambda[1] * geom.grad_lambda[1] + dlambda[2] * geom.grad_lambda[2] +
           dlambda[3] * geom.grad_lambda[3];
}

double phi0_value(const BarycentricPoint& l)
{
    return 2.0 - 4.0 * (l[0] * l[0] + l[1] * l[1] + l[2] * l[2] + l[3] * l[3]);
}

} // namespace

std::array<ShapeValue, kNumLagrange> eval_p2_lagrange(const BarycentricPoint& l, const TetGeometry& geom)
{
    std::array<ShapeValue, kNumLagrange> out;
    for (int i = 0; i < 4; ++i) {
        std::array<double, 4> d{};
        d[i] = 4.0 * l[i] - 1.0;
        out[i].value = l[i] * (2.0 * l[i] - 1.0);
        out[i].grad = chain(d, geom);
    }
    for (int k = 0; k < 6; ++k) {
        const int a = kLocalEdges[k][0];
        const int b = kLocalEdges[k][1];
        std::array<double, 4> d{};
        d[a] = 4.0 * l[b];
        d[b] = 4.0 * l[a];
        out[4 + k].value = 4.0 * l[a] * l[b];
        out[4 + k].grad = chain(d, geom);
    }
    return out;
}

ShapeValue eval_phi0(const BarycentricPoint& l, const TetGeometry& geom)
{
    const std::array<double, 4> d{-8.0 * l[0], -8.0 * l[1], -8.0 * l[2], -8.0 * l[3]};
    return {phi0_value(l), chain(d, geom)};
}

ShapeValue eval_phi_face(int i, const BarycentricPoint& l, const TetGeometry& geom)
{
    if (i < 0 || i > 3) {
        throw InvalidArgument("eval_phi_face: local face index must be 0..3, got " + std::to_string(i));
    }
    constexpr double c0 = 27.0 / 8.0;
    double sum_others = 0.0;
    std::array<double, 4> d{};
    for (int k = 0; k < 4; ++k) {
        // -(27/8) Phi0 contributes +27 l_k to every partial derivative.
        d[k] = 27.0 * l[k];
        if (k != i) {
            sum_others += l[k] * l[k];
            d[k] -= 36.0 * l[k];
        }
    }
    d[i] -= 24.0 * (1.0 - l[i]);
    const double value = 12.0 * (1.0 - l[i]) * (1.0 - l[i]) - 18.0 * sum_others - c0 * phi0_value(l);
    return {value, chain(d, geom)};
}

std::array<ShapeValue, kNumScalarShapes> eval_all_shapes(const BarycentricPoint& lambda, const TetGeometry& geom)
{
    std::array<ShapeValue, kNumScalarShapes> out;
    const auto lag = eval_p2_lagrange(lambda, geom);
    for (int k = 0; k < kNumLagrange; ++k) {
        out[k] = lag[k];
    }
    out[kCentralBubble] = eval_phi0(lambda, geom);
    for (int i = 0; i < 4; ++i) {
        out[kFirstFaceBubble + i] = eval_phi_face(i, lambda, geom);
    }
    return out;
}

} // namespace p2nc
