#include "surfstokes/linalg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "surfstokes/errors.hpp"
#include "surfstokes/linalg/ldlt.hpp"

namespace surfstokes::linalg {

InfSupEstimate estimate_infsup(const SparseMatrix& a, const SparseMatrix& b, const SparseMatrix& m,
                               const Eigen::VectorXd& c) {
    const int nu = a.rows();
    const int nc = b.rows();
    SURFSTOKES_THROW_IF(a.cols() != nu || b.cols() != nu || m.rows() != nc || m.cols() != nc,
                        ErrorCode::Internal, "inf-sup block shapes do not match");
    SURFSTOKES_THROW_IF(c.size() != 0 && c.size() != nc, ErrorCode::Internal,
                        "mean constraint has the wrong length");
    SURFSTOKES_THROW_IF(nu + nc > kDenseCap, ErrorCode::TooLarge,
                        "inf-sup estimate needs " + std::to_string(nu + nc) +
                            " dense unknowns, cap is " + std::to_string(kDenseCap));

    const Eigen::LLT<Eigen::MatrixXd> llt(a.to_dense());
    SURFSTOKES_THROW_IF(llt.info() != Eigen::Success, ErrorCode::SingularMatrix,
                        "energy Gram matrix is not positive definite");
    const Eigen::MatrixXd bd = b.to_dense();
    // S = B A^-1 B^T = W^T W with W = L^-1 B^T.
    const Eigen::MatrixXd w = llt.matrixL().solve(bd.transpose());
    Eigen::MatrixXd s = w.transpose() * w;
    Eigen::MatrixXd md = m.to_dense();

    if (c.size() != 0) {
        // Orthonormal basis of the complement of c from a Householder QR.
        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(c);
        const Eigen::MatrixXd q = qr.householderQ();
        const Eigen::MatrixXd z = q.rightCols(nc - 1);
        s = z.transpose() * s * z;
        md = z.transpose() * md * z;
    }
    s = 0.5 * (s + s.transpose()).eval();
    md = 0.5 * (md + md.transpose()).eval();

    InfSupEstimate out;
    out.dimension = static_cast<int>(s.rows());
    if (out.dimension == 0) return out;
    const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, md);
    SURFSTOKES_THROW_IF(eig.info() != Eigen::Success, ErrorCode::SingularMatrix,
                        "constraint Gram matrix is not positive definite");
    const Eigen::VectorXd& theta = eig.eigenvalues();
    const double top = std::max(theta.maxCoeff(), 0.0);
    const double tol = 1e-10 * top;
    out.beta_raw = std::sqrt(std::max(theta.minCoeff(), 0.0));
    double smallest = top;
    for (int i = 0; i < theta.size(); ++i) {
        if (theta[i] <= tol) {
            ++out.zero_modes;
        } else {
            smallest = std::min(smallest, theta[i]);
        }
    }
    out.beta = std::sqrt(smallest);
    return out;
}

RieszResult hminus1_riesz(const SparseMatrix& m_h1, const Eigen::VectorXd& g) {
    SURFSTOKES_THROW_IF(m_h1.rows() != g.size(), ErrorCode::Internal, "functional has the wrong length");
    RieszResult out;
    if (g.size() == 0 || g.isZero(0.0)) {
        out.representer = Eigen::VectorXd::Zero(g.size());
        return out;
    }
    const LdltFactor factor(m_h1);
    SURFSTOKES_THROW_IF(factor.inertia().negative > 0, ErrorCode::SingularMatrix,
                        "H1 Gram matrix is not positive definite");
    out.representer = factor.solve(g);
    out.norm = std::sqrt(std::max(g.dot(out.representer), 0.0));
    return out;
}

}  // namespace surfstokes::linalg
