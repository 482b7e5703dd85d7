#pragma once

#include <array>

#include "p2nc/mesh.hpp"
#include "p2nc/types.hpp"

namespace p2nc {

/// Barycentric coordinates of a point in a tet (sum to one).
using BarycentricPoint = std::array<double, 4>;

struct ShapeValue {
    double value{0.0};
    Vec3 grad{Vec3::Zero()}; // physical gradient
};

/// Number of scalar shape functions evaluated per tet:
/// 10 P2 Lagrange (4 vertices, then 6 edges in kLocalEdges order),
/// the central bubble, and the 4 face bubbles.
inline constexpr int kNumLagrange = 10;
inline constexpr int kCentralBubble = 10;
inline constexpr int kFirstFaceBubble = 11;
inline constexpr int kNumScalarShapes = 15;

/// P2 Lagrange basis: vertex i -> l_i (2 l_i - 1), edge (i,j) -> 4 l_i l_j.
[[nodiscard]] std::array<ShapeValue, kNumLagrange> eval_p2_lagrange(const BarycentricPoint& lambda,
                                                                   const TetGeometry& geom);

/// Central nonconforming bubble 2 - 4 (l1^2 + l2^2 + l3^2 + l4^2): zero P1
/// moments on all four faces, value one at the barycenter.
[[nodiscard]] ShapeValue eval_phi0(const BarycentricPoint& lambda, const TetGeometry& geom);

/**
 * Face bubble attached to local face i (opposite vertex i, 0-based):
 *
 *   12 (1 - l_i)^2 - 18 sum_{k != i} l_k^2 - (3/2)^3 Phi0.
 *
 * Its P1 moments on face i average to one, its P1 moments on the other three
 * faces vanish, and it is zero at the barycenter.
 */
[[nodiscard]] ShapeValue eval_phi_face(int i, const BarycentricPoint& lambda, const TetGeometry& geom);

/// All 15 scalar shapes at once (index layout given by the constants above).
[[nodiscard]] std::array<ShapeValue, kNumScalarShapes> eval_all_shapes(const BarycentricPoint& lambda,
                                                                      const TetGeometry& geom);

} // namespace p2nc
