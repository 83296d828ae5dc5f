#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

namespace surfstokes::fem {

/// Point of the reference triangle {(xi, eta) : xi, eta >= 0, xi + eta <= 1}.
using RefPoint = Eigen::Vector2d;

/// Equispaced Lagrange element of degree k on the reference triangle.
///
/// Node order: the three vertices, then the k-1 nodes of each edge
/// (v0->v1, v1->v2, v2->v0, listed in edge direction), then the interior
/// nodes. Barycentric coordinates are (1 - xi - eta, xi, eta).
class ReferenceElement {
public:
    static constexpr int kMaxDegree = 5;

    explicit ReferenceElement(int degree);

    int degree() const { return degree_; }
    int num_nodes() const { return static_cast<int>(indices_.size()); }
    int nodes_per_edge() const { return degree_ - 1; }
    int interior_nodes() const { return (degree_ - 1) * (degree_ - 2) / 2; }

    /// Barycentric multi-index (a0, a1, a2), a0 + a1 + a2 = k, of node i.
    const std::array<int, 3>& multi_index(int i) const { return indices_[i]; }
    RefPoint node(int i) const;

    void eval(const RefPoint& x, Eigen::VectorXd& values) const;
    /// grads.row(i) = (d/dxi, d/deta) of basis i.
    void eval(const RefPoint& x, Eigen::VectorXd& values, Eigen::MatrixX2d& grads) const;

    Eigen::VectorXd values(const RefPoint& x) const;
    Eigen::MatrixX2d gradients(const RefPoint& x) const;

    static int num_nodes_for(int degree) { return (degree + 1) * (degree + 2) / 2; }

private:
    int degree_;
    std::vector<std::array<int, 3>> indices_;
};

}  // namespace surfstokes::fem
