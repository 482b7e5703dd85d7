#include "p2nc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include <Eigen/Dense>

namespace p2nc {

namespace {

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d)
{
    return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

} // namespace

Vec3 TetGeometry::point(const std::array<double, 4>& lambda) const
{
    return lambda[0] * vertices[0] + lambda[1] * vertices[1] + lambda[2] * vertices[2] + lambda[3] * vertices[3];
}

TetGeometry compute_tet_geometry(const std::array<Vec3, 4>& vertices)
{
    TetGeometry g;
    g.vertices = vertices;

    Mat3 jac;
    jac.col(0) = vertices[1] - vertices[0];
    jac.col(1) = vertices[2] - vertices[0];
    jac.col(2) = vertices[3] - vertices[0];
    const double det = jac.determinant();

    double scale = 0.0;
    for (const auto& e : kLocalEdges) {
        scale = std::max(scale, (vertices[e[0]] - vertices[e[1]]).norm());
    }
    if (!(std::abs(det) > 1e-14 * scale * scale * scale) || !std::isfinite(det)) {
        throw MeshError("degenerate tetrahedron (volume " + std::to_string(det / 6.0) + ")");
    }

    g.volume = std::abs(det) / 6.0;
    // Rows of the inverse Jacobian are the gradients of lambda_1..lambda_3.
    const Mat3 inv = jac.inverse();
    g.grad_lambda[1] = inv.row(0).transpose();
    g.grad_lambda[2] = inv.row(1).transpose();
    g.grad_lambda[3] = inv.row(2).transpose();
    g.grad_lambda[0] = -(g.grad_lambda[1] + g.grad_lambda[2] + g.grad_lambda[3]);
    g.barycenter = 0.25 * (vertices[0] + vertices[1] + vertices[2] + vertices[3]);
    for (int i = 0; i < 4; ++i) {
        g.heights[i] = 1.0 / g.grad_lambda[i].norm();
    }
    return g;
}

TetMesh::TetMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets)
    : vertices_(std::move(vertices)), tets_(std::move(tets))
{
    const auto nv = static_cast<int>(vertices_.size());
    for (auto& t : tets_) {
        for (int v : t) {
            if (v < 0 || v >= nv) {
                throw InvalidArgument("tet references vertex " + std::to_string(v) + " out of range");
            }
        }
        if (signed_volume(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]], vertices_[t[3]]) < 0.0) {
            std::swap(t[2], t[3]);
        }
    }

    geometry_.reserve(tets_.size());
    for (const auto& t : tets_) {
        geometry_.push_back(compute_tet_geometry({vertices_[t[0]], vertices_[t[1]], vertices_[t[2]], vertices_[t[3]]}));
    }

    build_topology();
    classify();
}

void TetMesh::build_topology()
{
    const auto nt = static_cast<int>(tets_.size());

    struct FaceRef {
        std::array<int, 3> key;
        int tet;
        int local;
    };
    std::vector<FaceRef> face_refs;
    face_refs.reserve(4 * tets_.size());
    struct EdgeRef {
        std::array<int, 2> key;
        int tet;
        int local;
    };
    std::vector<EdgeRef> edge_refs;
    edge_refs.reserve(6 * tets_.size());

    for (int t = 0; t < nt; ++t) {
        const auto& tv = tets_[t];
        for (int i = 0; i < 4; ++i) {
            const auto& lf = kLocalFaceVertices[i];
            std::array<int, 3> key{tv[lf[0]], tv[lf[1]], tv[lf[2]]};
            std::sort(key.begin(), key.end());
            face_refs.push_back({key, t, i});
        }
        for (int k = 0; k < 6; ++k) {
            std::array<int, 2> key{tv[kLocalEdges[k][0]], tv[kLocalEdges[k][1]]};
            if (key[0] > key[1]) {
                std::swap(key[0], key[1]);
            }
            edge_refs.push_back({key, t, k});
        }
    }

    std::sort(face_refs.begin(), face_refs.end(), [](const FaceRef& a, const FaceRef& b) {
        return a.key != b.key ? a.key < b.key : a.tet < b.tet;
    });
    std::sort(edge_refs.begin(), edge_refs.end(), [](const EdgeRef& a, const EdgeRef& b) {
        return a.key != b.key ? a.key < b.key : a.tet < b.tet;
    });

    tet_faces_.assign(tets_.size(), {-1, -1, -1, -1});
    tet_edges_.assign(tets_.size(), {-1, -1, -1, -1, -1, -1});

    for (std::size_t i = 0; i < face_refs.size();) {
        std::size_t j = i;
        while (j < face_refs.size() && face_refs[j].key == face_refs[i].key) {
            ++j;
        }
        if (j - i > 2) {
            throw MeshError("face shared by more than two tetrahedra");
        }
        Face f;
        f.vertices = face_refs[i].key;
        const auto id = static_cast<int>(faces_.size());
        for (std::size_t k = i; k < j; ++k) {
            f.tets[k - i] = face_refs[k].tet;
            f.local[k - i] = face_refs[k].local;
            tet_faces_[face_refs[k].tet][face_refs[k].local] = id;
        }
        f.boundary = (j - i) == 1;

        const Vec3& a = vertices_[f.vertices[0]];
        const Vec3& b = vertices_[f.vertices[1]];
        const Vec3& c = vertices_[f.vertices[2]];
        const Vec3 cr = (b - a).cross(c - a);
        f.area = 0.5 * cr.norm();
        f.normal = cr.normalized();
        // Outward for tets[0]: the outward normal of face i is along -grad(lambda_i).
        if (f.normal.dot(geometry_[f.tets[0]].grad_lambda[f.local[0]]) > 0.0) {
            f.normal = -f.normal;
        }
        faces_.push_back(f);
        i = j;
    }

    h_ = 0.0;
    for (std::size_t i = 0; i < edge_refs.size();) {
        std::size_t j = i;
        const auto id = static_cast<int>(edges_.size());
        while (j < edge_refs.size() && edge_refs[j].key == edge_refs[i].key) {
            tet_edges_[edge_refs[j].tet][edge_refs[j].local] = id;
            ++j;
        }
        edges_.push_back(edge_refs[i].key);
        h_ = std::max(h_, (vertices_[edge_refs[i].key[0]] - vertices_[edge_refs[i].key[1]]).norm());
        i = j;
    }
}

void TetMesh::classify()
{
    // An entity is on the boundary when it lies on a face owned by a single tet.
    vertex_interior_.assign(vertices_.size(), 1);
    edge_interior_.assign(edges_.size(), 1);
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const Face& face = faces_[f];
        if (!face.boundary) {
            interior_faces_.push_back(static_cast<int>(f));
            continue;
        }
        for (int v : face.vertices) {
            vertex_interior_[v] = 0;
        }
        const int t = face.tets[0];
        const int opposite = face.local[0];
        for (int k = 0; k < 6; ++k) {
            if (kLocalEdges[k][0] != opposite && kLocalEdges[k][1] != opposite) {
                edge_interior_[tet_edges_[t][k]] = 0;
            }
        }
    }
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
        if (vertex_interior_[v]) {
            interior_vertices_.push_back(static_cast<int>(v));
        }
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (edge_interior_[e]) {
            interior_edges_.push_back(static_cast<int>(e));
        }
    }
}

double TetMesh::total_volume() const
{
    double s = 0.0;
    for (const auto& g : geometry_) {
        s += g.volume;
    }
    return s;
}

TetMesh build_cube_mesh(int n)
{
    if (n < 1) {
        throw InvalidArgument("build_cube_mesh: n must be positive, got " + std::to_string(n));
    }
    const int np = n + 1;
    auto vid = [np](int i, int j, int k) { return i + np * (j + np * k); };

    std::vector<Vec3> vertices;
    vertices.reserve(static_cast<std::size_t>(np) * np * np);
    for (int k = 0; k < np; ++k) {
        for (int j = 0; j < np; ++j) {
            for (int i = 0; i < np; ++i) {
                vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n, static_cast<double>(k) / n);
            }
        }
    }

    // Each tet follows a monotone lattice path from the cube's low corner to its
    // high corner, one axis per step, in the order given by a permutation.
    constexpr std::array<std::array<int, 3>, 6> perms{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    std::vector<std::array<int, 4>> tets;
    tets.reserve(6 * static_cast<std::size_t>(n) * n * n);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                for (const auto& p : perms) {
                    std::array<int, 3> c{i, j, k};
                    std::array<int, 4> t{};
                    t[0] = vid(c[0], c[1], c[2]);
                    for (int s = 0; s < 3; ++s) {
                        ++c[p[s]];
                        t[s + 1] = vid(c[0], c[1], c[2]);
                    }
                    tets.push_back(t);
                }
            }
        }
    }

    std::vector<std::size_t> order(tets.size());
    std::iota(order.begin(), order.end(), 0);
    auto sorted_key = [&](std::size_t t) {
        auto key = tets[t];
        std::sort(key.begin(), key.end());
        return key;
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sorted_key(a) < sorted_key(b); });
    std::vector<std::array<int, 4>> sorted;
    sorted.reserve(tets.size());
    for (auto t : order) {
        sorted.push_back(tets[t]);
    }
    return TetMesh(std::move(vertices), std::move(sorted));
}

const TetGeometry& tet_geometry(const TetMesh& mesh, int tet_id)
{
    if (tet_id < 0 || static_cast<std::size_t>(tet_id) >= mesh.num_tets()) {
        throw InvalidArgument("tet id " + std::to_string(tet_id) + " out of range");
    }
    return mesh.geometry(tet_id);
}

FaceFrame face_frame(const TetMesh& mesh, int face_id)
{
    if (face_id < 0 || static_cast<std::size_t>(face_id) >= mesh.num_faces()) {
        throw InvalidArgument("face id " + std::to_string(face_id) + " out of range");
    }
    const Face& f = mesh.faces()[face_id];
    return FaceFrame{f.area, f.normal, f.tets, f.num_tets(), f.tets[0]};
}

void write_vtk(const TetMesh& mesh, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw InvalidArgument("cannot open " + path.string() + " for writing");
    }
    out.precision(17);
    out << "# vtk DataFile Version 3.0\n";
    out << "p2nc tetrahedral mesh\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.num_vertices() << " double\n";
    for (const auto& v : mesh.vertices()) {
        out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    }
    out << "CELLS " << mesh.num_tets() << ' ' << 5 * mesh.num_tets() << '\n';
    for (const auto& t : mesh.tets()) {
        out << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
    }
    out << "CELL_TYPES " << mesh.num_tets() << '\n';
    for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
        out << "10\n"; // VTK_TETRA
    }
    out << "CELL_DATA " << mesh.num_tets() << '\n';
    out << "SCALARS volume double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
        out << mesh.geometry(static_cast<int>(t)).volume << '\n';
    }
    if (!out) {
        throw InvalidArgument("write to " + path.string() + " failed");
    }
}

} // namespace p2nc
