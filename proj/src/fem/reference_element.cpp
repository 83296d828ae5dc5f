#include "surfstokes/fem/reference_element.hpp"

#include <string>

#include "surfstokes/errors.hpp"

namespace surfstokes::fem {

ReferenceElement::ReferenceElement(int degree) : degree_(degree) {
    SURFSTOKES_THROW_IF(degree < 1 || degree > kMaxDegree, ErrorCode::Config,
                        "element degree must be in 1.." + std::to_string(kMaxDegree));
    const int k = degree;
    indices_.push_back({k, 0, 0});
    indices_.push_back({0, k, 0});
    indices_.push_back({0, 0, k});
    for (int j = 1; j < k; ++j) indices_.push_back({k - j, j, 0});
    for (int j = 1; j < k; ++j) indices_.push_back({0, k - j, j});
    for (int j = 1; j < k; ++j) indices_.push_back({j, 0, k - j});
    for (int a1 = 1; a1 < k; ++a1)
        for (int a2 = 1; a1 + a2 < k; ++a2) indices_.push_back({k - a1 - a2, a1, a2});
}

RefPoint ReferenceElement::node(int i) const {
    const auto& a = indices_[i];
    return {static_cast<double>(a[1]) / degree_, static_cast<double>(a[2]) / degree_};
}

namespace {

// prod_{s<a} (k l - s)/(s+1) and its derivative with respect to l.
inline void factor(int k, int a, double l, double& value, double& deriv) {
    value = 1.0;
    deriv = 0.0;
    for (int s = 0; s < a; ++s) {
        const double t = (k * l - s) / (s + 1);
        const double dt = static_cast<double>(k) / (s + 1);
        deriv = deriv * t + value * dt;
        value *= t;
    }
}

}  // namespace

void ReferenceElement::eval(const RefPoint& x, Eigen::VectorXd& values) const {
    const std::array<double, 3> lam{1.0 - x[0] - x[1], x[0], x[1]};
    values.resize(num_nodes());
    for (int i = 0; i < num_nodes(); ++i) {
        double v = 1.0;
        for (int m = 0; m < 3; ++m) {
            double f = 0.0;
            double df = 0.0;
            factor(degree_, indices_[i][m], lam[m], f, df);
            v *= f;
        }
        values[i] = v;
    }
}

void ReferenceElement::eval(const RefPoint& x, Eigen::VectorXd& values,
                            Eigen::MatrixX2d& grads) const {
    const std::array<double, 3> lam{1.0 - x[0] - x[1], x[0], x[1]};
    // d lambda_m / d(xi, eta)
    static constexpr double dl[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
    values.resize(num_nodes());
    grads.resize(num_nodes(), 2);
    for (int i = 0; i < num_nodes(); ++i) {
        std::array<double, 3> f{};
        std::array<double, 3> df{};
        for (int m = 0; m < 3; ++m) factor(degree_, indices_[i][m], lam[m], f[m], df[m]);
        values[i] = f[0] * f[1] * f[2];
        const std::array<double, 3> dv{df[0] * f[1] * f[2], f[0] * df[1] * f[2],
                                       f[0] * f[1] * df[2]};
        for (int c = 0; c < 2; ++c)
            grads(i, c) = dv[0] * dl[0][c] + dv[1] * dl[1][c] + dv[2] * dl[2][c];
    }
}

Eigen::VectorXd ReferenceElement::values(const RefPoint& x) const {
    Eigen::VectorXd v;
    eval(x, v);
    return v;
}

Eigen::MatrixX2d ReferenceElement::gradients(const RefPoint& x) const {
    Eigen::VectorXd v;
    Eigen::MatrixX2d g;
    eval(x, v, g);
    return g;
}

}  // namespace surfstokes::fem
