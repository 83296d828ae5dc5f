#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "surfstokes/fem/reference_element.hpp"
#include "surfstokes/mesh/curved_mesh.hpp"

namespace surfstokes::fem {

/// Parametric Lagrange space of degree k on a curved mesh, scalar or
/// 3-vector valued. Vector DOFs are interleaved: dof = 3 * node + component.
/// The mesh must outlive the space.
class FunctionSpace {
public:
    FunctionSpace(const mesh::CurvedMesh& mesh, int degree, int components);

    const mesh::CurvedMesh& mesh() const { return *mesh_; }
    const ReferenceElement& element() const { return ref_; }
    int degree() const { return ref_.degree(); }
    int components() const { return components_; }
    int num_nodes() const { return numbering_.num_nodes; }
    int num_dofs() const { return components_ * numbering_.num_nodes; }
    int local_dofs() const { return components_ * ref_.num_nodes(); }

    const std::vector<int>& element_nodes(int elem) const { return numbering_.element_nodes[elem]; }
    /// Local dof 3 * i + c (or i for scalars) -> global dof.
    void element_dofs(int elem, std::vector<int>& dofs) const;

    /// Position on the discrete surface of every node.
    const std::vector<Eigen::Vector3d>& node_points() const { return node_points_; }

private:
    const mesh::CurvedMesh* mesh_;
    ReferenceElement ref_;
    int components_;
    mesh::NodeNumbering numbering_;
    std::vector<Eigen::Vector3d> node_points_;
};

/// Where interpolation samples the field.
enum class NodeEvaluation {
    Lifted,     // at pi(node), i.e. the inverse lift of a field on the surface
    Discrete,   // at the node position on the discrete surface
};

using ScalarField = std::function<double(const Eigen::Vector3d&)>;
using VectorField = std::function<Eigen::Vector3d(const Eigen::Vector3d&)>;

Eigen::VectorXd interpolate(const FunctionSpace& space, const ScalarField& field,
                            NodeEvaluation where = NodeEvaluation::Lifted);
Eigen::VectorXd interpolate(const FunctionSpace& space, const VectorField& field,
                            NodeEvaluation where = NodeEvaluation::Lifted);

/// Basis values and discrete tangential gradients at one element point.
struct BasisAtPoint {
    Eigen::VectorXd values;
    Eigen::MatrixX3d grads;  // row i: grad_{Gamma_h} of basis i
};

void eval_basis(const ReferenceElement& ref, const RefPoint& x, const mesh::ElementPoint& geo,
                BasisAtPoint& out);

struct ScalarGradients {
    double value = 0.0;
    Eigen::Vector3d grad = Eigen::Vector3d::Zero();
};

struct VectorGradients {
    Eigen::Vector3d value = Eigen::Vector3d::Zero();
    Eigen::Matrix3d grad = Eigen::Matrix3d::Zero();    // annihilates n_h from the right
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();     // P_h grad
    Eigen::Matrix3d strain = Eigen::Matrix3d::Zero();  // sym(cov)
    double div = 0.0;
};

/// Discrete field and derivatives from local coefficients (ordered like
/// FunctionSpace::element_dofs).
ScalarGradients discrete_gradients_scalar(const BasisAtPoint& basis, const Eigen::VectorXd& local);
VectorGradients discrete_gradients_vector(const BasisAtPoint& basis, const mesh::ElementPoint& geo,
                                          const Eigen::VectorXd& local);

/// Gathers the element coefficients of a global vector.
Eigen::VectorXd gather(const FunctionSpace& space, int elem, const Eigen::VectorXd& global);

}  // namespace surfstokes::fem
