#pragma once

#include "p2nc/assembly.hpp"

namespace p2nc {

/**
 * Divergence-free test flow on the unit cube built from the potential
 *
 *   g = 2^12 x^2 (1-x)^2 y^2 (1-y)^2 z^2 (1-z)^2,
 *   u = (g_y - g_z, -g_x, g_x),  p = g_xy / 9,  f = -Laplace(u) + grad(p).
 *
 * All fields are closed-form; f uses analytic third derivatives of g.
 */
struct ManufacturedProblem {
    VectorField u;
    TensorField grad_u;
    ScalarField p;
    VectorField grad_p;
    VectorField f;

    [[nodiscard]] ExactSolution exact() const { return {u, grad_u, p}; }
};

[[nodiscard]] ManufacturedProblem manufactured();

/// d^i/dx^i of t^2 (1-t)^2 for i = 0..4.
[[nodiscard]] double bump_derivative(int order, double t);

} // namespace p2nc
