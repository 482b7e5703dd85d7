#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "p2nc/types.hpp"

namespace p2nc {

/// Local edge table of a tetrahedron: edge k joins local vertices kLocalEdges[k].
inline constexpr std::array<std::array<int, 2>, 6> kLocalEdges{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Local vertices of face i (the face opposite local vertex i), increasing order.
inline constexpr std::array<std::array<int, 3>, 4> kLocalFaceVertices{{{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

/**
 * Affine data of one tetrahedron.
 *
 * grad_lambda[i] is the constant gradient of the barycentric coordinate that
 * equals one at vertex i and vanishes on the opposite face. heights[i] is the
 * distance from vertex i to that face.
 */
struct TetGeometry {
    double volume{0.0};
    std::array<Vec3, 4> grad_lambda{};
    Vec3 barycenter{Vec3::Zero()};
    std::array<double, 4> heights{};
    std::array<Vec3, 4> vertices{};

    [[nodiscard]] Vec3 point(const std::array<double, 4>& lambda) const;
};

/// Geometry of a tet given by its four vertices. Orientation does not matter;
/// throws MeshError when the volume is not positive.
[[nodiscard]] TetGeometry compute_tet_geometry(const std::array<Vec3, 4>& vertices);

struct Face {
    std::array<int, 3> vertices{};   // sorted global vertex ids
    std::array<int, 2> tets{-1, -1}; // tets[0] < tets[1]; tets[1] == -1 on the boundary
    std::array<int, 2> local{-1, -1}; // local face index inside each adjacent tet
    double area{0.0};
    Vec3 normal{Vec3::Zero()}; // unit, points out of tets[0]
    bool boundary{false};

    [[nodiscard]] int num_tets() const { return tets[1] < 0 ? 1 : 2; }
};

struct FaceFrame {
    double area{0.0};
    Vec3 normal{Vec3::Zero()};
    std::array<int, 2> tets{-1, -1};
    int num_tets{0};
    int normal_points_out_of{-1}; // tet id the stored normal is outward for
};

class TetMesh {
public:
    TetMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets);

    [[nodiscard]] std::span<const Vec3> vertices() const { return vertices_; }
    [[nodiscard]] std::span<const std::array<int, 4>> tets() const { return tets_; }
    [[nodiscard]] std::span<const Face> faces() const { return faces_; }
    [[nodiscard]] std::span<const std::array<int, 2>> edges() const { return edges_; }

    [[nodiscard]] std::span<const int> interior_vertex_ids() const { return interior_vertices_; }
    [[nodiscard]] std::span<const int> interior_edge_ids() const { return interior_edges_; }
    [[nodiscard]] std::span<const int> interior_face_ids() const { return interior_faces_; }

    [[nodiscard]] std::size_t num_vertices() const { return vertices_.size(); }
    [[nodiscard]] std::size_t num_tets() const { return tets_.size(); }
    [[nodiscard]] std::size_t num_faces() const { return faces_.size(); }
    [[nodiscard]] std::size_t num_edges() const { return edges_.size(); }

    /// Face ids of tet t, entry i being the face opposite local vertex i.
    [[nodiscard]] const std::array<int, 4>& tet_faces(int t) const { return tet_faces_.at(t); }
    /// Edge ids of tet t in kLocalEdges order.
    [[nodiscard]] const std::array<int, 6>& tet_edges(int t) const { return tet_edges_.at(t); }
    [[nodiscard]] const TetGeometry& geometry(int t) const { return geometry_.at(t); }

    [[nodiscard]] bool vertex_is_interior(int v) const { return vertex_interior_.at(v) != 0; }
    [[nodiscard]] bool edge_is_interior(int e) const { return edge_interior_.at(e) != 0; }

    /// Longest edge length.
    [[nodiscard]] double h() const { return h_; }
    [[nodiscard]] double total_volume() const;

private:
    void build_topology();
    void classify();

    std::vector<Vec3> vertices_;
    std::vector<std::array<int, 4>> tets_;
    std::vector<Face> faces_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<std::array<int, 4>> tet_faces_;
    std::vector<std::array<int, 6>> tet_edges_;
    std::vector<TetGeometry> geometry_;
    std::vector<char> vertex_interior_;
    std::vector<char> edge_interior_;
    std::vector<int> interior_vertices_;
    std::vector<int> interior_edges_;
    std::vector<int> interior_faces_;
    double h_{0.0};
};

/// n x n x n Freudenthal/Kuhn mesh of the unit cube: every sub-cube is cut
/// into six tets around its (0,0,0)-(1,1,1) diagonal.
[[nodiscard]] TetMesh build_cube_mesh(int n);

[[nodiscard]] const TetGeometry& tet_geometry(const TetMesh& mesh, int tet_id);
[[nodiscard]] FaceFrame face_frame(const TetMesh& mesh, int face_id);

/// Legacy ASCII VTK unstructured grid (points + VTK_TETRA cells).
void write_vtk(const TetMesh& mesh, const std::filesystem::path& path);

} // namespace p2nc
