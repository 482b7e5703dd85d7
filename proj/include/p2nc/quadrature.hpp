#pragma once

#include <array>
#include <vector>

namespace p2nc {

enum class QuadDomain { Tet, Triangle };

/**
 * Quadrature on the reference simplex, in barycentric coordinates.
 *
 * Weights are normalized to sum to one, so integrating over a physical
 * element means multiplying by its measure. Triangle points use the first
 * three barycentric entries; the fourth is zero.
 */
struct QuadratureRule {
    QuadDomain domain{QuadDomain::Tet};
    int degree{0};
    std::vector<std::array<double, 4>> points;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const { return weights.size(); }
};

inline constexpr int kMaxQuadratureDegree = 40;

/// Conical (collapsed) Gauss-Jacobi product rule exact for polynomials of
/// total degree <= degree. Throws InvalidArgument outside [0, kMaxQuadratureDegree].
[[nodiscard]] QuadratureRule quadrature(QuadDomain domain, int degree);

/// Cached reference to the rule; safe to call concurrently.
[[nodiscard]] const QuadratureRule& cached_quadrature(QuadDomain domain, int degree);

/// Gauss-Jacobi nodes/weights on [0, 1] for the weight (1 - t)^alpha.
struct GaussJacobi {
    std::vector<double> nodes;
    std::vector<double> weights;
};
[[nodiscard]] GaussJacobi gauss_jacobi01(int num_points, int alpha);

} // namespace p2nc
