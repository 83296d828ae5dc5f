#pragma once

#include <vector>

#include <Eigen/Core>

#include "surfstokes/linalg/sparse.hpp"

namespace surfstokes::linalg {

struct Inertia {
    int positive = 0;
    int negative = 0;
    int zero = 0;

    friend bool operator==(const Inertia&, const Inertia&) = default;
};

struct FactorOptions {
    /// Optional per-unknown sign hint: +1 for unknowns whose diagonal block
    /// is positive definite, -1 for constraint unknowns. When present, the
    /// hint is used to regularize the diagonal by sign * regularization *
    /// max|diag|, which makes saddle matrices quasi-definite.
    std::vector<signed char> signs;
    double regularization = 1e-10;
    /// Pivots with |d| <= singular_threshold * max|diag|, or pivots that
    /// cancel to rounding level against the terms they are formed from,
    /// count as zero.
    double singular_threshold = 1e-13;
    /// Iterative refinement against the unregularized matrix.
    int max_refinement_steps = 20;
    double target_residual = 1e-9;
};

struct SolveReport {
    double relative_residual = 0.0;
    int refinement_steps = 0;
};

/// Sparse up-looking LDL^T factorization with approximate minimum degree
/// ordering and static pivoting.
///
/// Pivots are taken in a fill-reducing order without interchanges. The sign
/// hints regularize saddle matrices into quasi-definite ones, and each
/// constraint unknown is ordered right after a distinct velocity partner so
/// that the pair acts as a 2x2 pivot. Constraint unknowns that still meet a
/// zero pivot are moved to the end and the factorization is repeated.
/// Remaining zero pivots are replaced by a signed threshold value and
/// counted in the zero part of the inertia. Solves refine iteratively
/// against the original matrix, which must outlive the factor.
class LdltFactor {
public:
    LdltFactor(const SparseMatrix& matrix, FactorOptions options = {});

    int size() const { return n_; }
    Inertia inertia() const { return inertia_; }
    long factor_nonzeros() const { return static_cast<long>(li_.size()); }
    const Eigen::VectorXd& pivots() const { return d_; }

    /// Solution with relative residual <= target_residual; throws
    /// SingularMatrix if the matrix is singular or refinement stalls above
    /// the target.
    Eigen::VectorXd solve(const Eigen::VectorXd& b, SolveReport* report = nullptr) const;

    /// One pass through the factors, no refinement.
    Eigen::VectorXd apply_inverse(const Eigen::VectorXd& b) const;

private:
    static constexpr int kMaxReorderings = 3;
    /// Symbolic and numeric factorization in the order perm_. Returns the
    /// constraint unknowns (negative sign hint) with tiny pivots.
    std::vector<int> factorize();

    const SparseMatrix* matrix_;
    FactorOptions options_;
    int n_ = 0;
    std::vector<int> perm_;   // elimination position -> original index
    std::vector<int> pinv_;   // original index -> elimination position
    std::vector<long> lp_;
    std::vector<int> li_;
    std::vector<double> lx_;
    Eigen::VectorXd d_;
    Inertia inertia_;
};

/// Factor, solve and report inertia in one call. The matrix is only
/// referenced during the call.
Eigen::VectorXd factor_and_solve(const SparseMatrix& matrix, const Eigen::VectorXd& b,
                                 const FactorOptions& options = {}, Inertia* inertia = nullptr,
                                 SolveReport* report = nullptr);

}  // namespace surfstokes::linalg
