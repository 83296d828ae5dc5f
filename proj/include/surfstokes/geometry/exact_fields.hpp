#pragma once

#include <numbers>

#include <Eigen/Core>

#include "surfstokes/geometry/dual.hpp"
#include "surfstokes/geometry/surface.hpp"

namespace surfstokes::geometry {

/// Tangential calculus of a vector field given in closed form on an ambient
/// neighbourhood. `field` must be callable with V3<T> for T = double and
/// nested Dual types (a generic lambda).
struct VectorSurfaceOperators {
    Eigen::Vector3d value;
    Eigen::Matrix3d grad;    // grad v P
    Eigen::Matrix3d cov;     // P grad v P
    Eigen::Matrix3d strain;  // sym(cov)
    double div = 0.0;        // tr(grad)
    Eigen::Vector3d div_strain;  // row-wise surface divergence of the strain
};

struct ScalarSurfaceOperators {
    double value = 0.0;
    Eigen::Vector3d grad;  // P grad f
};

template <class Field>
ScalarSurfaceOperators scalar_surface_operators(const LevelSetSurface& surface, const Field& f,
                                                const Eigen::Vector3d& p) {
    const SurfaceFrame fr = surface.frame_at(p);
    const auto vg = value_grad([&](const auto& y) { return f(y); }, to_v3(p));
    return {vg.value, fr.projector * to_eigen(vg.grad)};
}

/// Strain of the ambient field sym(P grad v P), with P from the extended
/// normal, evaluated at x.
template <class T, class Field>
M3<T> extended_strain(const LevelSetSurface& surface, const Field& v, const V3<T>& x) {
    const auto vj = vector_jacobian([&](const auto& y) { return v(y); }, x);
    const V3<T> n = surface.normal_extension(x);
    M3<T> proj;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) proj[i][j] = T(i == j ? 1.0 : 0.0) - n[i] * n[j];
    M3<T> pg;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            T s(0.0);
            for (int a = 0; a < 3; ++a) s += proj[i][a] * vj.jac[a][j];
            pg[i][j] = s;
        }
    M3<T> pgp;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            T s(0.0);
            for (int b = 0; b < 3; ++b) s += pg[i][b] * proj[b][j];
            pgp[i][j] = s;
        }
    M3<T> e;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) e[i][j] = 0.5 * (pgp[i][j] + pgp[j][i]);
    return e;
}

template <class Field>
VectorSurfaceOperators vector_surface_operators(const LevelSetSurface& surface, const Field& v,
                                                const Eigen::Vector3d& p) {
    const SurfaceFrame fr = surface.frame_at(p);
    const auto vj = vector_jacobian([&](const auto& y) { return v(y); }, to_v3(p));
    VectorSurfaceOperators out;
    out.value = to_eigen(vj.value);
    out.grad = to_eigen(vj.jac) * fr.projector;
    out.cov = fr.projector * out.grad;
    out.strain = 0.5 * (out.cov + out.cov.transpose());
    out.div = out.grad.trace();

    // Tangential derivatives of the extended strain do not depend on the
    // extension, so div_G E_i = sum_jl d_l E_ij P_jl.
    const M3<Dual<double>> e = extended_strain(surface, v, seed(to_v3(p)));
    out.div_strain.setZero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l) out.div_strain[i] += e[i][j].d[l] * fr.projector(j, l);
    return out;
}

enum class MultiplierChoice { Zero, Linear };

MultiplierChoice parse_multiplier_choice(std::string_view name);

/// Exact data at a point p on the surface.
struct ExactPoint {
    Eigen::Vector3d u;
    Eigen::Matrix3d grad_u;  // tangential gradient, annihilates n from the right
    double p = 0.0;
    Eigen::Vector3d grad_p;  // tangential gradient
    double lambda = 0.0;
    double div_u = 0.0;
};

/// Smooth manufactured solution (u, p, lambda) of the generalized surface
/// Stokes problem on one of the three surfaces.
///
///   sphere:    u = P(-x3^2, x2, x1),           p = x1 x2^2 + x3
///   biconcave: u = curl_G(x1^2 x2 - 5 x3^3),   p = x1 x2^2 + x3
///   varying:   u = curl_G(cos cos cos / 2pi),  p = sin(pi x1) sin(2pi x2) sin(2pi x3)
///
/// with curl_G psi = n x grad psi and lambda = x1 + x2 + x3 (or zero).
///
/// Surface derivatives are evaluated as tangential derivatives of smooth
/// ambient extensions (the normal is extended by grad(phi)/|grad(phi)|),
/// which agree on the surface with derivatives of the normal-constant
/// extension.
class ExactSolution {
public:
    ExactSolution(const LevelSetSurface& surface, MultiplierChoice multiplier, double mu);

    const LevelSetSurface& surface() const { return surface_; }
    double mu() const { return mu_; }
    MultiplierChoice multiplier_choice() const { return multiplier_; }

    template <class T>
    T stream_function(const V3<T>& x) const;

    template <class T>
    V3<T> velocity(const V3<T>& x) const;

    template <class T>
    T pressure(const V3<T>& x) const;

    template <class T>
    T multiplier(const V3<T>& x) const {
        if (multiplier_ == MultiplierChoice::Zero) return T(0.0);
        return x[0] + x[1] + x[2];
    }

    ExactPoint evaluate(const Eigen::Vector3d& p) const;

    /// E(u) = sym(P grad_G u) at p.
    Eigen::Matrix3d strain(const Eigen::Vector3d& p) const;

    /// Row-wise surface divergence of E(u) at p.
    Eigen::Vector3d div_strain(const Eigen::Vector3d& p) const;

    /// f = -2 mu div_G E(u) + u + lambda n + grad_G p at p.
    Eigen::Vector3d rhs(const Eigen::Vector3d& p) const;

    /// g = div_G u at p (zero for the stream-function cases).
    double divergence(const Eigen::Vector3d& p) const { return evaluate(p).div_u; }

private:
    LevelSetSurface surface_;
    MultiplierChoice multiplier_;
    double mu_;
};

template <class T>
T ExactSolution::stream_function(const V3<T>& x) const {
    using std::cos;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    switch (surface_.kind()) {
        case SurfaceKind::Biconcave:
            return x[0] * x[0] * x[1] - 5.0 * x[2] * x[2] * x[2];
        case SurfaceKind::Varying:
            return cos(two_pi * x[0]) * cos(two_pi * x[1]) * cos(two_pi * x[2]) / two_pi;
        case SurfaceKind::Sphere:
            break;
    }
    return T(0.0);
}

template <class T>
V3<T> ExactSolution::velocity(const V3<T>& x) const {
    const V3<T> n = surface_.normal_extension(x);
    if (surface_.kind() == SurfaceKind::Sphere) {
        const V3<T> w{-(x[2] * x[2]), x[1], x[0]};
        return project_tangent(n, w);
    }
    const auto psi = value_grad([this](const auto& y) { return stream_function(y); }, x);
    return cross(n, psi.grad);
}

template <class T>
T ExactSolution::pressure(const V3<T>& x) const {
    using std::sin;
    constexpr double pi = std::numbers::pi;
    switch (surface_.kind()) {
        case SurfaceKind::Sphere:
        case SurfaceKind::Biconcave:
            return x[0] * x[1] * x[1] + x[2];
        case SurfaceKind::Varying:
            return sin(pi * x[0]) * sin(2.0 * pi * x[1]) * sin(2.0 * pi * x[2]);
    }
    return T(0.0);
}

}  // namespace surfstokes::geometry
