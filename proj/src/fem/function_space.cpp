#include "surfstokes/fem/function_space.hpp"

#include "surfstokes/errors.hpp"

namespace surfstokes::fem {

FunctionSpace::FunctionSpace(const mesh::CurvedMesh& mesh, int degree, int components)
    : mesh_(&mesh), ref_(degree), components_(components) {
    SURFSTOKES_THROW_IF(components != 1 && components != 3, ErrorCode::Config,
                        "function space components must be 1 or 3");
    numbering_ = mesh::make_numbering(mesh.base(), degree);
    node_points_.assign(numbering_.num_nodes, Eigen::Vector3d::Zero());
    std::vector<char> done(numbering_.num_nodes, 0);
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const auto& loc = numbering_.element_nodes[t];
        for (int i = 0; i < ref_.num_nodes(); ++i) {
            if (done[loc[i]]) continue;
            done[loc[i]] = 1;
            node_points_[loc[i]] = mesh.element_geometry(t, ref_.node(i)).x;
        }
    }
}

void FunctionSpace::element_dofs(int elem, std::vector<int>& dofs) const {
    const auto& loc = numbering_.element_nodes[elem];
    dofs.resize(loc.size() * components_);
    if (components_ == 1) {
        std::copy(loc.begin(), loc.end(), dofs.begin());
        return;
    }
    for (std::size_t i = 0; i < loc.size(); ++i)
        for (int c = 0; c < 3; ++c) dofs[3 * i + c] = 3 * loc[i] + c;
}

namespace {

Eigen::Vector3d sample_point(const FunctionSpace& space, int node, NodeEvaluation where) {
    const Eigen::Vector3d& x = space.node_points()[node];
    if (where == NodeEvaluation::Discrete) return x;
    return space.mesh().surface().closest_point(x);
}

}  // namespace

Eigen::VectorXd interpolate(const FunctionSpace& space, const ScalarField& field,
                            NodeEvaluation where) {
    SURFSTOKES_THROW_IF(space.components() != 1, ErrorCode::Config,
                        "scalar interpolation into a vector space");
    Eigen::VectorXd out(space.num_dofs());
    for (int n = 0; n < space.num_nodes(); ++n) out[n] = field(sample_point(space, n, where));
    return out;
}

Eigen::VectorXd interpolate(const FunctionSpace& space, const VectorField& field,
                            NodeEvaluation where) {
    SURFSTOKES_THROW_IF(space.components() != 3, ErrorCode::Config,
                        "vector interpolation into a scalar space");
    Eigen::VectorXd out(space.num_dofs());
    for (int n = 0; n < space.num_nodes(); ++n)
        out.segment<3>(3 * n) = field(sample_point(space, n, where));
    return out;
}

void eval_basis(const ReferenceElement& ref, const RefPoint& x, const mesh::ElementPoint& geo,
                BasisAtPoint& out) {
    Eigen::MatrixX2d rg;
    ref.eval(x, out.values, rg);
    out.grads = rg * geo.pinv_t.transpose();
}

ScalarGradients discrete_gradients_scalar(const BasisAtPoint& basis, const Eigen::VectorXd& local) {
    ScalarGradients g;
    g.value = basis.values.dot(local);
    g.grad = basis.grads.transpose() * local;
    return g;
}

VectorGradients discrete_gradients_vector(const BasisAtPoint& basis, const mesh::ElementPoint& geo,
                                          const Eigen::VectorXd& local) {
    VectorGradients g;
    const int n = static_cast<int>(basis.values.size());
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector3d c = local.segment<3>(3 * i);
        g.value += basis.values[i] * c;
        g.grad += c * basis.grads.row(i);
    }
    g.cov = geo.projector * g.grad;
    g.strain = 0.5 * (g.cov + g.cov.transpose());
    g.div = g.grad.trace();
    return g;
}

Eigen::VectorXd gather(const FunctionSpace& space, int elem, const Eigen::VectorXd& global) {
    thread_local std::vector<int> dofs;
    space.element_dofs(elem, dofs);
    Eigen::VectorXd out(dofs.size());
    for (std::size_t i = 0; i < dofs.size(); ++i) out[i] = global[dofs[i]];
    return out;
}

}  // namespace surfstokes::fem
