#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Geometry>

#include "p2nc/mesh.hpp"

namespace p2nc {
namespace {

// Independent entity enumeration straight from the tet list.
struct Counts {
    std::size_t edges, faces, boundary_faces, interior_faces;
};

Counts enumerate(const TetMesh& mesh)
{
    std::set<std::array<int, 2>> edges;
    std::map<std::array<int, 3>, int> faces;
    for (const auto& t : mesh.tets()) {
        for (int a = 0; a < 4; ++a) {
            for (int b = a + 1; b < 4; ++b) {
                edges.insert({std::min(t[a], t[b]), std::max(t[a], t[b])});
            }
            std::array<int, 3> f{};
            int k = 0;
            for (int b = 0; b < 4; ++b) {
                if (b != a) {
                    f[k++] = t[b];
                }
            }
            std::sort(f.begin(), f.end());
            ++faces[f];
        }
    }
    Counts c{edges.size(), faces.size(), 0, 0};
    for (const auto& [f, n] : faces) {
        (n == 1 ? c.boundary_faces : c.interior_faces) += 1;
    }
    return c;
}

TEST(CubeMesh, SingleCubeCounts)
{
    const TetMesh mesh = build_cube_mesh(1);
    EXPECT_EQ(mesh.num_vertices(), 8u);
    EXPECT_EQ(mesh.num_edges(), 19u);
    EXPECT_EQ(mesh.num_faces(), 18u);
    EXPECT_EQ(mesh.num_tets(), 6u);
    EXPECT_EQ(mesh.interior_vertex_ids().size(), 0u);
    ASSERT_EQ(mesh.interior_edge_ids().size(), 1u);
    EXPECT_EQ(mesh.interior_face_ids().size(), 6u);

    // The single interior edge is the body diagonal.
    const auto& e = mesh.edges()[mesh.interior_edge_ids()[0]];
    const Vec3 mid = 0.5 * (mesh.vertices()[e[0]] + mesh.vertices()[e[1]]);
    EXPECT_NEAR((mid - Vec3(0.5, 0.5, 0.5)).norm(), 0.0, 1e-15);
}

TEST(CubeMesh, TwoCubeVolume)
{
    const TetMesh mesh = build_cube_mesh(2);
    EXPECT_EQ(mesh.num_tets(), 48u);
    EXPECT_NEAR(mesh.total_volume(), 1.0, 1e-12);
}

TEST(CubeMesh, ClosedFormCountsMatchEnumeration)
{
    for (int n = 1; n <= 4; ++n) {
        const TetMesh mesh = build_cube_mesh(n);
        const auto c = enumerate(mesh);
        const std::size_t n3 = static_cast<std::size_t>(n) * n * n;
        const std::size_t n2 = static_cast<std::size_t>(n) * n;
        EXPECT_EQ(mesh.num_tets(), 6 * n3);
        EXPECT_EQ(c.faces, 12 * n3 + 6 * n2);
        EXPECT_EQ(c.boundary_faces, 12 * n2);
        EXPECT_EQ(c.interior_faces, 12 * n3 - 6 * n2);
        EXPECT_EQ(mesh.num_faces(), c.faces);
        EXPECT_EQ(mesh.num_edges(), c.edges);
        EXPECT_EQ(mesh.interior_face_ids().size(), c.interior_faces);
        EXPECT_EQ(4 * mesh.num_tets(), 2 * c.interior_faces + c.boundary_faces);
        EXPECT_NEAR(mesh.total_volume(), 1.0, 1e-12);
        EXPECT_EQ(mesh.interior_vertex_ids().size(), static_cast<std::size_t>((n - 1) * (n - 1) * (n - 1)));
    }
}

TEST(CubeMesh, RejectsZeroCells)
{
    EXPECT_THROW((void)build_cube_mesh(0), InvalidArgument);
    EXPECT_THROW((void)build_cube_mesh(-3), InvalidArgument);
}

TEST(CubeMesh, TetsPositivelyOrientedAndDeterministic)
{
    const TetMesh a = build_cube_mesh(3);
    const TetMesh b = build_cube_mesh(3);
    ASSERT_EQ(a.num_tets(), b.num_tets());
    for (std::size_t t = 0; t < a.num_tets(); ++t) {
        EXPECT_EQ(a.tets()[t], b.tets()[t]);
        const auto& v = a.tets()[t];
        const auto& x = a.vertices();
        EXPECT_GT((x[v[1]] - x[v[0]]).dot((x[v[2]] - x[v[0]]).cross(x[v[3]] - x[v[0]])), 0.0);
    }
    // Faces and edges are sorted lexicographically by vertex tuples.
    EXPECT_TRUE(std::is_sorted(a.edges().begin(), a.edges().end()));
    EXPECT_TRUE(std::is_sorted(a.faces().begin(), a.faces().end(),
                               [](const Face& f, const Face& g) { return f.vertices < g.vertices; }));
}

TEST(CubeMesh, MeshSizeHalves)
{
    double prev = build_cube_mesh(1).h();
    EXPECT_NEAR(prev, std::sqrt(3.0), 1e-12);
    for (int n = 2; n <= 8; n *= 2) {
        const double h = build_cube_mesh(n).h();
        EXPECT_NEAR(h, 0.5 * prev, 1e-12);
        prev = h;
    }
}

TEST(CubeMesh, InteriorClassificationIsGeometric)
{
    const TetMesh mesh = build_cube_mesh(3);
    auto strictly_inside = [](const Vec3& p) {
        return (p.array() > 1e-12).all() && (p.array() < 1.0 - 1e-12).all();
    };
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
        const auto& ed = mesh.edges()[e];
        EXPECT_EQ(mesh.edge_is_interior(static_cast<int>(e)),
                  strictly_inside(0.5 * (mesh.vertices()[ed[0]] + mesh.vertices()[ed[1]])));
    }
    for (const auto& f : mesh.faces()) {
        const Vec3 c = (mesh.vertices()[f.vertices[0]] + mesh.vertices()[f.vertices[1]] + mesh.vertices()[f.vertices[2]]) / 3.0;
        EXPECT_EQ(!f.boundary, strictly_inside(c));
        EXPECT_EQ(f.num_tets(), f.boundary ? 1 : 2);
    }
}

TEST(CubeMesh, FaceNormalsFixedAndConsistent)
{
    const TetMesh mesh = build_cube_mesh(2);
    for (std::size_t fid = 0; fid < mesh.num_faces(); ++fid) {
        const Face& f = mesh.faces()[fid];
        const Vec3& a = mesh.vertices()[f.vertices[0]];
        const Vec3& b = mesh.vertices()[f.vertices[1]];
        const Vec3& c = mesh.vertices()[f.vertices[2]];
        EXPECT_NEAR(f.normal.norm(), 1.0, 1e-14);
        EXPECT_NEAR(f.normal.dot(b - a), 0.0, 1e-12);
        EXPECT_NEAR(f.normal.dot(c - a), 0.0, 1e-12);

        // Outward for tets[0] (the smaller id); inward for tets[1].
        auto outward = [&](int t, int local) {
            return Vec3(-mesh.geometry(t).grad_lambda[local].normalized());
        };
        EXPECT_NEAR((f.normal - outward(f.tets[0], f.local[0])).norm(), 0.0, 1e-12);
        if (!f.boundary) {
            EXPECT_LT(f.tets[0], f.tets[1]);
            EXPECT_NEAR((f.normal + outward(f.tets[1], f.local[1])).norm(), 0.0, 1e-12);
        } else {
            // Boundary normals point out of the cube.
            const Vec3 centroid = (a + b + c) / 3.0;
            EXPECT_GT(f.normal.dot(centroid - Vec3(0.5, 0.5, 0.5)), 0.0);
        }
    }
}

TEST(CubeMesh, TetFaceAndEdgeTables)
{
    const TetMesh mesh = build_cube_mesh(2);
    for (int t = 0; t < static_cast<int>(mesh.num_tets()); ++t) {
        const auto& tv = mesh.tets()[t];
        for (int i = 0; i < 4; ++i) {
            const Face& f = mesh.faces()[mesh.tet_faces(t)[i]];
            EXPECT_EQ(std::count(f.vertices.begin(), f.vertices.end(), tv[i]), 0);
            EXPECT_TRUE(f.tets[0] == t || f.tets[1] == t);
        }
        for (int k = 0; k < 6; ++k) {
            const auto& e = mesh.edges()[mesh.tet_edges(t)[k]];
            const int a = tv[kLocalEdges[k][0]];
            const int b = tv[kLocalEdges[k][1]];
            EXPECT_EQ(e[0], std::min(a, b));
            EXPECT_EQ(e[1], std::max(a, b));
        }
    }
}

TEST(TetGeometry, ReferenceTet)
{
    const auto g = compute_tet_geometry({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)});
    EXPECT_NEAR(g.volume, 1.0 / 6.0, 1e-15);
    EXPECT_NEAR((g.grad_lambda[0] - Vec3(-1, -1, -1)).norm(), 0.0, 1e-15);
    EXPECT_NEAR((g.grad_lambda[1] - Vec3(1, 0, 0)).norm(), 0.0, 1e-15);
    EXPECT_NEAR((g.barycenter - Vec3(0.25, 0.25, 0.25)).norm(), 0.0, 1e-15);
    EXPECT_NEAR(g.heights[1], 1.0, 1e-15);
    EXPECT_NEAR(g.heights[0], 1.0 / std::sqrt(3.0), 1e-15);
}

TEST(TetGeometry, BarycentricInvariantsOnMesh)
{
    const TetMesh mesh = build_cube_mesh(3);
    for (int t = 0; t < static_cast<int>(mesh.num_tets()); ++t) {
        const auto& g = tet_geometry(mesh, t);
        EXPECT_GT(g.volume, 0.0);
        EXPECT_NEAR((g.grad_lambda[0] + g.grad_lambda[1] + g.grad_lambda[2] + g.grad_lambda[3]).norm(), 0.0, 1e-12);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                EXPECT_NEAR(g.grad_lambda[i].dot(g.vertices[j] - g.vertices[i]), (i == j ? 1.0 : 0.0) - 1.0, 1e-12);
            }
        }
    }
    EXPECT_THROW((void)tet_geometry(mesh, -1), InvalidArgument);
    EXPECT_THROW((void)tet_geometry(mesh, static_cast<int>(mesh.num_tets())), InvalidArgument);
}

TEST(TetGeometry, DegenerateTetThrows)
{
    EXPECT_THROW((void)compute_tet_geometry({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0)}), MeshError);
    // Negative orientation is accepted; the volume is reported positive.
    const auto g = compute_tet_geometry({Vec3(0, 0, 0), Vec3(0, 1, 0), Vec3(1, 0, 0), Vec3(0, 0, 1)});
    EXPECT_NEAR(g.volume, 1.0 / 6.0, 1e-15);
}

TEST(FaceFrame, RightTriangleInPlane)
{
    const TetMesh mesh({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)}, {{0, 1, 2, 3}});
    // Face {0,1,2} lies in z = 0.
    int fid = -1;
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        if (mesh.faces()[f].vertices == std::array<int, 3>{0, 1, 2}) {
            fid = static_cast<int>(f);
        }
    }
    ASSERT_GE(fid, 0);
    const auto fr = face_frame(mesh, fid);
    EXPECT_NEAR(fr.area, 0.5, 1e-15);
    EXPECT_NEAR(std::abs(fr.normal.z()), 1.0, 1e-15);
    EXPECT_NEAR(fr.normal.z(), -1.0, 1e-15); // outward
    EXPECT_EQ(fr.num_tets, 1);
    EXPECT_THROW((void)face_frame(mesh, 99), InvalidArgument);
}

TEST(FaceFrame, InteriorAndBoundaryAdjacency)
{
    const TetMesh mesh = build_cube_mesh(1);
    for (int f : mesh.interior_face_ids()) {
        const auto fr = face_frame(mesh, f);
        EXPECT_EQ(fr.num_tets, 2);
        EXPECT_EQ(fr.normal_points_out_of, fr.tets[0]);
    }
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        if (mesh.faces()[f].boundary) {
            EXPECT_EQ(face_frame(mesh, static_cast<int>(f)).num_tets, 1);
        }
    }
}

TEST(Vtk, WritesLegacyUnstructuredGrid)
{
    const TetMesh mesh = build_cube_mesh(1);
    const auto path = std::filesystem::temp_directory_path() / "p2nc_test_cube1.vtk";
    write_vtk(mesh, path);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    EXPECT_EQ(text.rfind("# vtk DataFile Version 3.0\n", 0), 0u);
    EXPECT_NE(text.find("DATASET UNSTRUCTURED_GRID"), std::string::npos);
    EXPECT_NE(text.find("POINTS 8 double"), std::string::npos);
    EXPECT_NE(text.find("CELLS 6 30"), std::string::npos);
    EXPECT_NE(text.find("CELL_TYPES 6"), std::string::npos);
    std::filesystem::remove(path);
}

} // namespace
} // namespace p2nc
