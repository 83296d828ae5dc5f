#include "dense_oracle.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

namespace oracle {

bool gauss_solve(Eigen::MatrixXd a, Eigen::VectorXd b, Eigen::VectorXd& x, double* log_abs_det) {
    const int n = static_cast<int>(a.rows());
    double logdet = 0.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (a(piv, k) == 0.0) return false;
        if (piv != k) {
            a.row(k).swap(a.row(piv));
            std::swap(b[k], b[piv]);
        }
        logdet += std::log(std::abs(a(k, k)));
        // Rank-one update of the trailing block, column by column.
        const int m = n - k - 1;
        const Eigen::VectorXd l = a.col(k).tail(m) / a(k, k);
        for (int j = k; j < n; ++j) a.col(j).tail(m) -= a(k, j) * l;
        b.tail(m) -= b[k] * l;
    }
    x.resize(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    if (log_abs_det != nullptr) *log_abs_det = logdet;
    return true;
}

surfstokes::linalg::Inertia eigen_inertia(const Eigen::MatrixXd& a, double tol) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    surfstokes::linalg::Inertia in;
    for (double v : ev) {
        if (std::abs(v) <= tol * scale)
            ++in.zero;
        else if (v > 0)
            ++in.positive;
        else
            ++in.negative;
    }
    return in;
}

double loglog_slope(const std::vector<double>& h, const std::vector<double>& e) {
    const int n = static_cast<int>(h.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double x = std::log(h[i]);
        const double y = std::log(e[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
