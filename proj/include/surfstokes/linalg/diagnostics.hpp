#pragma once

#include <Eigen/Core>

#include "surfstokes/linalg/sparse.hpp"

namespace surfstokes::linalg {

/// Dense work above this many unknowns (velocity plus constraints) throws
/// TooLarge.
inline constexpr int kDenseCap = 4000;

struct InfSupEstimate {
    double beta = 0.0;       // sqrt of the smallest nonzero eigenvalue
    double beta_raw = 0.0;   // sqrt of the smallest eigenvalue, clamped at 0
    int zero_modes = 0;      // eigenvalues below 1e-10 times the largest
    int dimension = 0;       // size of the constrained eigenproblem
};

/// Discrete inf-sup constant: S q = theta M q with S = B A^-1 B^T, over the
/// subspace { q : c^T q = 0 }. An empty c leaves the space unconstrained.
/// A is the velocity energy Gram matrix, B stacks the constraint rows and M
/// is the Gram matrix of the constraint space.
InfSupEstimate estimate_infsup(const SparseMatrix& a, const SparseMatrix& b, const SparseMatrix& m,
                               const Eigen::VectorXd& c = {});

struct RieszResult {
    Eigen::VectorXd representer;
    double norm = 0.0;
};

/// Dual norm of the functional g w.r.t. the Gram matrix m_h1:
/// r = m_h1^-1 g, norm = sqrt(g^T r).
RieszResult hminus1_riesz(const SparseMatrix& m_h1, const Eigen::VectorXd& g);

}  // namespace surfstokes::linalg
