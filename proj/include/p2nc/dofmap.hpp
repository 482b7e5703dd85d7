#pragma once

#include <array>
#include <vector>

#include "p2nc/mesh.hpp"
#include "p2nc/shape.hpp"

namespace p2nc {

enum class DofKind { Conforming, CentralBubble, FaceBubble };

/**
 * Global numbering of the velocity space (conforming P2 nodes x 3 components,
 * then 3 central bubbles per tet, then one face bubble per interior face) and
 * of the discontinuous P1 pressure space (4 nodal values per tet).
 *
 * Boundary vertices, boundary edges and boundary faces carry no DOF.
 */
class DofMap {
public:
    explicit DofMap(const TetMesh& mesh);

    [[nodiscard]] int num_conforming() const { return n_conforming_; } // n_c
    [[nodiscard]] int num_central() const { return n_central_; }       // n_1
    [[nodiscard]] int num_face() const { return n_face_; }             // interior faces
    [[nodiscard]] int num_bubbles() const { return n_central_ + n_face_; } // n_nc
    [[nodiscard]] int num_velocity() const { return n_conforming_ + n_central_ + n_face_; }
    [[nodiscard]] int num_pressure() const { return n_pressure_; }

    /// First of the 3 component DOFs at a vertex / edge midpoint, -1 on the boundary.
    [[nodiscard]] int vertex_dof(int v) const { return vertex_dof_.at(v); }
    [[nodiscard]] int edge_dof(int e) const { return edge_dof_.at(e); }
    [[nodiscard]] int central_dof(int t) const { return n_conforming_ + 3 * t; }
    /// Face-bubble DOF of a face, -1 for boundary faces.
    [[nodiscard]] int face_dof(int f) const { return face_dof_.at(f); }
    [[nodiscard]] int pressure_dof(int t, int local_vertex) const { return 4 * t + local_vertex; }

    [[nodiscard]] DofKind kind(int dof) const;

private:
    int n_conforming_{0};
    int n_central_{0};
    int n_face_{0};
    int n_pressure_{0};
    std::vector<int> vertex_dof_;
    std::vector<int> edge_dof_;
    std::vector<int> face_dof_;
};

[[nodiscard]] DofMap build_dof_map(const TetMesh& mesh);

/// One vector-valued local basis function: scalar shape times a constant direction.
struct LocalVelocityFunction {
    int dof{-1};
    DofKind kind{DofKind::Conforming};
    int shape{0};        // index into eval_all_shapes()
    Vec3 direction{Vec3::Zero()}; // E_m, or the face's fixed normal for face bubbles
};

struct VectorShapeValue {
    Vec3 value{Vec3::Zero()};
    Mat3 grad{Mat3::Zero()}; // grad(r, c) = d v_r / d x_c
    [[nodiscard]] double divergence() const { return grad.trace(); }
};

[[nodiscard]] std::vector<LocalVelocityFunction> local_velocity_basis(const TetMesh& mesh, const DofMap& dofs,
                                                                       int tet_id);

[[nodiscard]] VectorShapeValue evaluate(const LocalVelocityFunction& fn,
                                        const std::array<ShapeValue, kNumScalarShapes>& shapes);

/// Tet barycentric coordinates of a point given by barycentric coordinates on
/// face `face_id` (weights attached to the face's sorted global vertices).
[[nodiscard]] BarycentricPoint face_to_tet_barycentric(const TetMesh& mesh, int face_id, int tet_id,
                                                       const std::array<double, 3>& face_lambda);

/// Moments of the one-sided trace of a global basis function on a face,
/// taken from the adjacent tet `tet_id`: entry m is int_F phi lambda_m dS,
/// lambda_m being the face barycentric coordinate of the m-th sorted vertex.
[[nodiscard]] std::array<Vec3, 3> trace_moments(const TetMesh& mesh, const DofMap& dofs, int dof, int face_id,
                                                int tet_id);

/// P1 moments of the jump [phi] = phi|tets[0] - phi|tets[1] across an interior face.
/// Throws InvalidArgument for boundary faces.
[[nodiscard]] std::array<Vec3, 3> jump_moments(const TetMesh& mesh, const DofMap& dofs, int dof, int face_id);

} // namespace p2nc
