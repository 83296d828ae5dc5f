#pragma once

// Forward-mode dual numbers over three independent variables.
//
// Dual<T> carries a value and its gradient with respect to x = (x0, x1, x2).
// Nesting composes: Dual<Dual<double>> yields value, gradient and Hessian,
// Dual<Dual<Dual<double>>> adds third derivatives. All field formulas in the
// geometry module are written as templates over the scalar type so the same
// code is evaluated in plain doubles or any nesting depth.

#include <array>
#include <cmath>

#include <Eigen/Core>

namespace surfstokes::geometry {

template <class T>
using V3 = std::array<T, 3>;

template <class T>
using M3 = std::array<std::array<T, 3>, 3>;

template <class T>
struct Dual {
    T v{};
    std::array<T, 3> d{};

    constexpr Dual() = default;
    constexpr Dual(double c) : v(c) {}  // NOLINT: implicit constants are intended
    constexpr Dual(const T& value, const std::array<T, 3>& grad) : v(value), d(grad) {}

    // Needed when T is itself a Dual: allows Dual<Dual<double>>(Dual<double>).
    template <class U = T, class = std::enable_if_t<!std::is_same_v<U, double>>>
    constexpr Dual(const T& value) : v(value) {}
};

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};

// Underlying double of any nesting depth.
inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& x) { return primal(x.v); }

// ---------------------------------------------------------------------------
// Arithmetic

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
    return {a.v + b.v, {a.d[0] + b.d[0], a.d[1] + b.d[1], a.d[2] + b.d[2]}};
}
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
    return {a.v - b.v, {a.d[0] - b.d[0], a.d[1] - b.d[1], a.d[2] - b.d[2]}};
}
template <class T>
Dual<T> operator-(const Dual<T>& a) {
    return {-a.v, {-a.d[0], -a.d[1], -a.d[2]}};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
    return {a.v * b.v,
            {a.d[0] * b.v + a.v * b.d[0], a.d[1] * b.v + a.v * b.d[1],
             a.d[2] * b.v + a.v * b.d[2]}};
}
template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    const T inv = 1.0 / b.v;
    const T q = a.v * inv;
    return {q,
            {(a.d[0] - q * b.d[0]) * inv, (a.d[1] - q * b.d[1]) * inv,
             (a.d[2] - q * b.d[2]) * inv}};
}

template <class T>
Dual<T> operator+(const Dual<T>& a, double c) { return {a.v + c, a.d}; }
template <class T>
Dual<T> operator+(double c, const Dual<T>& a) { return {a.v + c, a.d}; }
template <class T>
Dual<T> operator-(const Dual<T>& a, double c) { return {a.v - c, a.d}; }
template <class T>
Dual<T> operator-(double c, const Dual<T>& a) { return {c - a.v, {-a.d[0], -a.d[1], -a.d[2]}}; }
template <class T>
Dual<T> operator*(const Dual<T>& a, double c) {
    return {a.v * c, {a.d[0] * c, a.d[1] * c, a.d[2] * c}};
}
template <class T>
Dual<T> operator*(double c, const Dual<T>& a) { return a * c; }
template <class T>
Dual<T> operator/(const Dual<T>& a, double c) { return a * (1.0 / c); }
template <class T>
Dual<T> operator/(double c, const Dual<T>& a) { return Dual<T>(c) / a; }

template <class T>
Dual<T>& operator+=(Dual<T>& a, const Dual<T>& b) { return a = a + b; }
template <class T>
Dual<T>& operator-=(Dual<T>& a, const Dual<T>& b) { return a = a - b; }
template <class T>
Dual<T>& operator*=(Dual<T>& a, const Dual<T>& b) { return a = a * b; }
template <class T>
Dual<T>& operator+=(Dual<T>& a, double c) { return a = a + c; }
template <class T>
Dual<T>& operator*=(Dual<T>& a, double c) { return a = a * c; }

// ---------------------------------------------------------------------------
// Elementary functions (chain rule on the outermost level, recursion inside)

template <class T>
Dual<T> chain(const Dual<T>& a, const T& f, const T& df) {
    return {f, {df * a.d[0], df * a.d[1], df * a.d[2]}};
}

template <class T>
Dual<T> sin(const Dual<T>& a) {
    using std::cos;
    using std::sin;
    return chain(a, T(sin(a.v)), T(cos(a.v)));
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
    using std::cos;
    using std::sin;
    return chain(a, T(cos(a.v)), T(-sin(a.v)));
}
template <class T>
Dual<T> exp(const Dual<T>& a) {
    using std::exp;
    const T e = exp(a.v);
    return chain(a, e, e);
}
template <class T>
Dual<T> log(const Dual<T>& a) {
    using std::log;
    return chain(a, T(log(a.v)), T(1.0 / a.v));
}
template <class T>
Dual<T> sqrt(const Dual<T>& a) {
    using std::sqrt;
    const T s = sqrt(a.v);
    return chain(a, s, T(0.5 / s));
}

/// Integer power by repeated multiplication; exact on polynomials.
template <class S>
S ipow(const S& a, int n) {
    S r(1.0);
    for (int i = 0; i < n; ++i) r = r * a;
    return r;
}

// ---------------------------------------------------------------------------
// Seeding and extraction

/// Promote a point to the next nesting level with unit seeds d_j = e_j.
template <class T>
V3<Dual<T>> seed(const V3<T>& x) {
    V3<Dual<T>> out;
    for (int i = 0; i < 3; ++i) {
        out[i].v = x[i];
        for (int j = 0; j < 3; ++j) out[i].d[j] = T(i == j ? 1.0 : 0.0);
    }
    return out;
}

template <class T>
struct ValueGrad {
    T value;
    V3<T> grad;
};

template <class T>
struct VectorJacobian {
    V3<T> value;
    M3<T> jac;  // jac[i][j] = d value_i / d x_j
};

template <class T, class F>
ValueGrad<T> value_grad(F&& f, const V3<T>& x) {
    const Dual<T> r = f(seed(x));
    return {r.v, r.d};
}

template <class T, class F>
VectorJacobian<T> vector_jacobian(F&& f, const V3<T>& x) {
    const V3<Dual<T>> r = f(seed(x));
    VectorJacobian<T> out;
    for (int i = 0; i < 3; ++i) {
        out.value[i] = r[i].v;
        for (int j = 0; j < 3; ++j) out.jac[i][j] = r[i].d[j];
    }
    return out;
}

/// Value, gradient and Hessian of a scalar function at a point.
struct SecondOrderDual {
    double value = 0.0;
    Eigen::Vector3d grad = Eigen::Vector3d::Zero();
    Eigen::Matrix3d hess = Eigen::Matrix3d::Zero();
};

template <class F>
SecondOrderDual second_order(F&& f, const Eigen::Vector3d& x) {
    const V3<Dual<Dual<double>>> xs = seed(seed(V3<double>{x[0], x[1], x[2]}));
    const Dual<Dual<double>> r = f(xs);
    SecondOrderDual out;
    out.value = r.v.v;
    for (int i = 0; i < 3; ++i) {
        out.grad[i] = r.v.d[i];
        for (int j = 0; j < 3; ++j) out.hess(i, j) = r.d[i].d[j];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Small generic vector helpers

template <class T>
T dot(const V3<T>& a, const V3<T>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <class T>
V3<T> cross(const V3<T>& a, const V3<T>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class T>
V3<T> normalized(const V3<T>& a) {
    using std::sqrt;
    const T inv = 1.0 / sqrt(dot(a, a));
    return {a[0] * inv, a[1] * inv, a[2] * inv};
}

/// (I - n n^T) w
template <class T>
V3<T> project_tangent(const V3<T>& n, const V3<T>& w) {
    const T s = dot(n, w);
    return {w[0] - s * n[0], w[1] - s * n[1], w[2] - s * n[2]};
}

inline V3<double> to_v3(const Eigen::Vector3d& x) { return {x[0], x[1], x[2]}; }
inline Eigen::Vector3d to_eigen(const V3<double>& x) { return {x[0], x[1], x[2]}; }
inline Eigen::Matrix3d to_eigen(const M3<double>& m) {
    Eigen::Matrix3d out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out(i, j) = m[i][j];
    return out;
}

}  // namespace surfstokes::geometry
