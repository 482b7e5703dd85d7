#include "p2nc/dofmap.hpp"

#include <string>

#include "p2nc/quadrature.hpp"

namespace p2nc {

DofMap::DofMap(const TetMesh& mesh)
{
    vertex_dof_.assign(mesh.num_vertices(), -1);
    edge_dof_.assign(mesh.num_edges(), -1);
    face_dof_.assign(mesh.num_faces(), -1);

    int next = 0;
    for (int v : mesh.interior_vertex_ids()) {
        vertex_dof_[v] = next;
        next += 3;
    }
    for (int e : mesh.interior_edge_ids()) {
        edge_dof_[e] = next;
        next += 3;
    }
    n_conforming_ = next;
    n_central_ = 3 * static_cast<int>(mesh.num_tets());
    next += n_central_;
    for (int f : mesh.interior_face_ids()) {
        face_dof_[f] = next++;
    }
    n_face_ = static_cast<int>(mesh.interior_face_ids().size());
    n_pressure_ = 4 * static_cast<int>(mesh.num_tets());
}

DofKind DofMap::kind(int dof) const
{
    if (dof < 0 || dof >= num_velocity()) {
        throw InvalidArgument("velocity dof " + std::to_string(dof) + " out of range");
    }
    if (dof < n_conforming_) {
        return DofKind::Conforming;
    }
    if (dof < n_conforming_ + n_central_) {
        return DofKind::CentralBubble;
    }
    return DofKind::FaceBubble;
}

DofMap build_dof_map(const TetMesh& mesh)
{
    return DofMap(mesh);
}

std::vector<LocalVelocityFunction> local_velocity_basis(const TetMesh& mesh, const DofMap& dofs, int tet_id)
{
    if (tet_id < 0 || static_cast<std::size_t>(tet_id) >= mesh.num_tets()) {
        throw InvalidArgument("tet id " + std::to_string(tet_id) + " out of range");
    }
    const auto& tv = mesh.tets()[tet_id];
    const auto& te = mesh.tet_edges(tet_id);
    const auto& tf = mesh.tet_faces(tet_id);

    std::vector<LocalVelocityFunction> out;
    out.reserve(37);
    auto add_components = [&](int base, int shape, DofKind kind) {
        for (int m = 0; m < 3; ++m) {
            out.push_back({base + m, kind, shape, Vec3::Unit(m)});
        }
    };
    for (int i = 0; i < 4; ++i) {
        if (const int d = dofs.vertex_dof(tv[i]); d >= 0) {
            add_components(d, i, DofKind::Conforming);
        }
    }
    for (int k = 0; k < 6; ++k) {
        if (const int d = dofs.edge_dof(te[k]); d >= 0) {
            add_components(d, 4 + k, DofKind::Conforming);
        }
    }
    add_components(dofs.central_dof(tet_id), kCentralBubble, DofKind::CentralBubble);
    for (int i = 0; i < 4; ++i) {
        if (const int d = dofs.face_dof(tf[i]); d >= 0) {
            out.push_back({d, DofKind::FaceBubble, kFirstFaceBubble + i, mesh.faces()[tf[i]].normal});
        }
    }
    return out;
}

VectorShapeValue evaluate(const LocalVelocityFunction& fn, const std::array<ShapeValue, kNumScalarShapes>& shapes)
{
    const ShapeValue& s = shapes[fn.shape];
    return {s.value * fn.direction, fn.direction * s.grad.transpose()};
}

BarycentricPoint face_to_tet_barycentric(const TetMesh& mesh, int face_id, int tet_id,
                                         const std::array<double, 3>& face_lambda)
{
    const Face& f = mesh.faces()[face_id];
    const auto& tv = mesh.tets()[tet_id];
    BarycentricPoint l{0.0, 0.0, 0.0, 0.0};
    for (int m = 0; m < 3; ++m) {
        int local = -1;
        for (int i = 0; i < 4; ++i) {
            if (tv[i] == f.vertices[m]) {
                local = i;
            }
        }
        if (local < 0) {
            throw InvalidArgument("face " + std::to_string(face_id) + " is not a face of tet " + std::to_string(tet_id));
        }
        l[local] = face_lambda[m];
    }
    return l;
}

std::array<Vec3, 3> trace_moments(const TetMesh& mesh, const DofMap& dofs, int dof, int face_id, int tet_id)
{
    std::array<Vec3, 3> out{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    const auto basis = local_velocity_basis(mesh, dofs, tet_id);
    const LocalVelocityFunction* fn = nullptr;
    for (const auto& b : basis) {
        if (b.dof == dof) {
            fn = &b;
        }
    }
    if (fn == nullptr) {
        return out;
    }
    const Face& f = mesh.faces()[face_id];
    const TetGeometry& geom = mesh.geometry(tet_id);
    // Integrand is P2 x P1 = P3 on the face; degree 4 gives margin.
    const auto& rule = cached_quadrature(QuadDomain::Triangle, 4);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const std::array<double, 3> fl{rule.points[q][0], rule.points[q][1], rule.points[q][2]};
        const auto lambda = face_to_tet_barycentric(mesh, face_id, tet_id, fl);
        const auto shapes = eval_all_shapes(lambda, geom);
        const Vec3 v = evaluate(*fn, shapes).value;
        const double w = rule.weights[q] * f.area;
        for (int m = 0; m < 3; ++m) {
            out[m] += w * fl[m] * v;
        }
    }
    return out;
}

std::array<Vec3, 3> jump_moments(const TetMesh& mesh, const DofMap& dofs, int dof, int face_id)
{
    if (face_id < 0 || static_cast<std::size_t>(face_id) >= mesh.num_faces()) {
        throw InvalidArgument("face id " + std::to_string(face_id) + " out of range");
    }
    const Face& f = mesh.faces()[face_id];
    if (f.boundary) {
        throw InvalidArgument("jump_moments: face " + std::to_string(face_id) + " is a boundary face");
    }
    auto plus = trace_moments(mesh, dofs, dof, face_id, f.tets[0]);
    const auto minus = trace_moments(mesh, dofs, dof, face_id, f.tets[1]);
    for (int m = 0; m < 3; ++m) {
        plus[m] -= minus[m];
    }
    return plus;
}

} // namespace p2nc
