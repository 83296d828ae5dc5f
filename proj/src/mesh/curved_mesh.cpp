#include "surfstokes/mesh/curved_mesh.hpp"

#include <string>

#include <Eigen/Dense>

namespace surfstokes::mesh {

NodeNumbering make_numbering(const BaseMesh& mesh, int degree) {
    const fem::ReferenceElement ref(degree);
    const int k = degree;
    const int ne = k - 1;
    const int ni = ref.interior_nodes();
    const int nv = mesh.num_vertices();
    const int edge_base = nv;
    const int cell_base = nv + ne * mesh.num_edges();

    NodeNumbering out;
    out.degree = degree;
    out.num_nodes = cell_base + ni * mesh.num_triangles();
    out.element_nodes.resize(mesh.num_triangles());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Triangle& tri = mesh.triangles()[t];
        std::vector<int>& loc = out.element_nodes[t];
        loc.resize(ref.num_nodes());
        for (int i = 0; i < 3; ++i) loc[i] = tri[i];
        for (int e = 0; e < 3; ++e) {
            const int ge = mesh.triangle_edges()[t][e];
            const bool forward = tri[e] < tri[(e + 1) % 3];
            for (int j = 0; j < ne; ++j)
                loc[3 + e * ne + j] = edge_base + ge * ne + (forward ? j : ne - 1 - j);
        }
        for (int j = 0; j < ni; ++j) loc[3 + 3 * ne + j] = cell_base + t * ni + j;
    }
    return out;
}

CurvedMesh::CurvedMesh(BaseMesh base, const geometry::LevelSetSurface& surface, int kg)
    : base_(std::move(base)), surface_(surface), kg_(kg), ref_([kg] {
          SURFSTOKES_THROW_IF(kg < 1 || kg > kMaxGeometryDegree, ErrorCode::Config,
                              "geometry degree kg must be in 1..5");
          return kg;
      }()) {
    numbering_ = make_numbering(base_, kg_);
    nodes_.assign(numbering_.num_nodes, Eigen::Vector3d::Zero());
    std::vector<char> done(numbering_.num_nodes, 0);
    for (int t = 0; t < num_elements(); ++t) {
        const auto& loc = numbering_.element_nodes[t];
        for (int i = 0; i < ref_.num_nodes(); ++i) {
            const int g = loc[i];
            if (done[g]) continue;
            done[g] = 1;
            // Vertices already lie on the surface; keep them bitwise.
            nodes_[g] = i < 3 ? base_.vertices()[g] : surface_.closest_point(flat_point(t, ref_.node(i)));
        }
    }
}

Eigen::Vector3d CurvedMesh::flat_point(int elem, const fem::RefPoint& ref) const {
    const Triangle& tri = base_.triangles()[elem];
    const auto& v = base_.vertices();
    return (1.0 - ref[0] - ref[1]) * v[tri[0]] + ref[0] * v[tri[1]] + ref[1] * v[tri[2]];
}

ElementPoint CurvedMesh::element_geometry(int elem, const fem::RefPoint& ref) const {
    thread_local Eigen::VectorXd phi;
    thread_local Eigen::MatrixX2d dphi;
    ref_.eval(ref, phi, dphi);
    const auto& loc = numbering_.element_nodes[elem];
    ElementPoint p;
    p.x.setZero();
    p.jac.setZero();
    for (int i = 0; i < ref_.num_nodes(); ++i) {
        const Eigen::Vector3d& X = nodes_[loc[i]];
        p.x += phi[i] * X;
        p.jac += X * dphi.row(i);
    }
    const Eigen::Vector3d c = p.jac.col(0).cross(p.jac.col(1));
    p.area = c.norm();
    SURFSTOKES_THROW_IF(p.area < 1e-14, ErrorCode::DegenerateElement,
                        "element " + std::to_string(elem) + ": |J| below 1e-14");
    p.normal = c / p.area;
    const Eigen::Matrix2d g = p.jac.transpose() * p.jac;
    p.pinv_t = p.jac * g.inverse();
    p.projector = Eigen::Matrix3d::Identity() - p.normal * p.normal.transpose();
    return p;
}

}  // namespace surfstokes::mesh
