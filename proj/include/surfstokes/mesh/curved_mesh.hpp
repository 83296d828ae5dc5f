#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "surfstokes/fem/reference_element.hpp"
#include "surfstokes/geometry/surface.hpp"
#include "surfstokes/mesh/base_mesh.hpp"

namespace surfstokes::mesh {

/// Global numbering of the degree-k Lagrange nodes of a triangulation:
/// vertices, then edge nodes (edge by edge, ordered from the lower to the
/// higher vertex index), then cell-interior nodes.
struct NodeNumbering {
    int degree = 1;
    int num_nodes = 0;
    std::vector<std::vector<int>> element_nodes;  // local reference node -> global node
};

NodeNumbering make_numbering(const BaseMesh& mesh, int degree);

/// Geometry of one curved element at a reference point.
struct ElementPoint {
    Eigen::Vector3d x;       // F_T(ref)
    Eigen::Matrix<double, 3, 2> jac;
    Eigen::Vector3d normal;  // unit n_h
    double area = 0.0;       // |J_0 x J_1|
    Eigen::Matrix<double, 3, 2> pinv_t;  // J (J^T J)^{-1}: surface gradient = pinv_t * ref_grad
    Eigen::Matrix3d projector;           // I - n_h n_h^T
};

/// Order-k_g parametric triangulation: each flat triangle carries the
/// images under the closest-point map of its equispaced degree-k_g nodes.
class CurvedMesh {
public:
    static constexpr int kMaxGeometryDegree = 5;

    CurvedMesh(BaseMesh base, const geometry::LevelSetSurface& surface, int kg);

    const BaseMesh& base() const { return base_; }
    const geometry::LevelSetSurface& surface() const { return surface_; }
    int kg() const { return kg_; }
    int num_elements() const { return base_.num_triangles(); }
    double h() const { return base_.h(); }

    const NodeNumbering& numbering() const { return numbering_; }
    const std::vector<Eigen::Vector3d>& nodes() const { return nodes_; }
    const fem::ReferenceElement& geometry_element() const { return ref_; }

    /// Throws DegenerateElement if |J| < 1e-14.
    ElementPoint element_geometry(int elem, const fem::RefPoint& ref) const;

    /// Point of the flat parent triangle at a reference point.
    Eigen::Vector3d flat_point(int elem, const fem::RefPoint& ref) const;

private:
    BaseMesh base_;
    geometry::LevelSetSurface surface_;
    int kg_;
    fem::ReferenceElement ref_;
    NodeNumbering numbering_;
    std::vector<Eigen::Vector3d> nodes_;
};

/// Builds the curved mesh; same as the constructor.
inline CurvedMesh build_curved(BaseMesh base, const geometry::LevelSetSurface& surface, int kg) {
    return CurvedMesh(std::move(base), surface, kg);
}

}  // namespace surfstokes::mesh
