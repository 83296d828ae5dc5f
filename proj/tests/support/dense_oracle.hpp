#pragma once

#include <Eigen/Core>

#include "surfstokes/linalg/ldlt.hpp"

namespace oracle {

/// Gaussian elimination with partial pivoting, written out without library
/// factorizations. Returns false if a pivot is exactly zero.
bool gauss_solve(Eigen::MatrixXd a, Eigen::VectorXd b, Eigen::VectorXd& x, double* log_abs_det = nullptr);

/// Signs of the eigenvalues of a symmetric matrix; |lambda| <= tol * max|lambda| counts as zero.
surfstokes::linalg::Inertia eigen_inertia(const Eigen::MatrixXd& a, double tol = 1e-12);

/// Least-squares slope of log(e) against log(h).
double loglog_slope(const std::vector<double>& h, const std::vector<double>& e);

}  // namespace oracle
