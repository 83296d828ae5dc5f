#pragma once

#include <vector>

#include <Eigen/Core>

#include "surfstokes/fem/function_space.hpp"
#include "surfstokes/fem/quadrature.hpp"
#include "surfstokes/mesh/curved_mesh.hpp"

namespace surfstokes::fem {

/// Element geometry at every quadrature point of every element.
class GeometryCache {
public:
    GeometryCache(const mesh::CurvedMesh& mesh, QuadratureRule rule, int threads = 1);

    const QuadratureRule& rule() const { return rule_; }
    int num_elements() const { return num_elements_; }
    int points_per_element() const { return rule_.size(); }
    const mesh::ElementPoint& at(int elem, int q) const { return points_[elem * rule_.size() + q]; }
    /// Quadrature weight times surface density.
    double dx(int elem, int q) const { return rule_.weights[q] * at(elem, q).area; }

private:
    QuadratureRule rule_;
    int num_elements_;
    std::vector<mesh::ElementPoint> points_;
};

/// Reference basis values and gradients at the points of a rule.
class BasisTable {
public:
    BasisTable(const ReferenceElement& ref, const QuadratureRule& rule);

    int num_basis() const { return num_basis_; }
    const Eigen::VectorXd& values(int q) const { return values_[q]; }
    /// Values and surface gradients at quadrature point q of an element.
    void eval(int q, const mesh::ElementPoint& geo, BasisAtPoint& out) const;

private:
    int num_basis_;
    std::vector<Eigen::VectorXd> values_;
    std::vector<Eigen::MatrixX2d> grads_;
};

}  // namespace surfstokes::fem
