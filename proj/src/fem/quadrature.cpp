#include "surfstokes/fem/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "surfstokes/errors.hpp"

namespace surfstokes::fem {

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

QuadratureRule make_quadrature(int exactness) {
    SURFSTOKES_THROW_IF(exactness < 0 || exactness > kMaxQuadratureExactness, ErrorCode::Config,
                        "quadrature exactness must be in 0..20");
    // Duffy map (u, v) -> (u (1 - v), v): the integrand gains one degree in v.
    const int n = (exactness + 2 + 1) / 2;
    std::vector<double> x;
    std::vector<double> w;
    gauss_legendre_01(n, x, w);

    QuadratureRule rule;
    rule.exactness = exactness;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = x[j];
            rule.points.emplace_back(x[i] * (1.0 - v), v);
            rule.weights.push_back(w[i] * w[j] * (1.0 - v));
        }
    return rule;
}

}  // namespace surfstokes::fem
