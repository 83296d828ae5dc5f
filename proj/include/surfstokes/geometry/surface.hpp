#pragma once

#include <numbers>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "surfstokes/errors.hpp"
#include "surfstokes/geometry/dual.hpp"

namespace surfstokes::geometry {

enum class SurfaceKind { Sphere, Biconcave, Varying };

SurfaceKind parse_surface_kind(std::string_view name);
std::string_view surface_kind_name(SurfaceKind kind);

/// Orthonormal data of the exact surface at a point p on it.
struct SurfaceFrame {
    Eigen::Vector3d point;
    Eigen::Vector3d normal;
    Eigen::Matrix3d projector;  // I - n n^T
    Eigen::Matrix3d weingarten;  // symmetric, tangential, H n = 0
    double mean_curvature = 0.0;
};

/// Closed surface given as the zero level set of a closed-form function,
/// negative inside. The level-set formulas are templates over the scalar
/// type so they can be differentiated to any order with Dual numbers.
class LevelSetSurface {
public:
    explicit LevelSetSurface(SurfaceKind kind);

    SurfaceKind kind() const { return kind_; }

    // Biconcave shape constants.
    static constexpr double kBiconcaveD = 0.91;
    static constexpr double kBiconcaveC = 0.95;

    template <class T>
    T phi(const V3<T>& x) const;

    /// Smooth ambient extension of the unit normal, grad(phi)/|grad(phi)|.
    /// Agrees with the exact normal on the surface.
    template <class T>
    V3<T> normal_extension(const V3<T>& x) const {
        const auto g = value_grad([this](const auto& y) { return phi(y); }, x);
        return normalized(g.grad);
    }

    SecondOrderDual eval_phi(const Eigen::Vector3d& x) const;

    /// Closest point on the surface. Throws NonConvergence when the damped
    /// Newton iteration fails to settle within 100 steps.
    Eigen::Vector3d closest_point(const Eigen::Vector3d& x) const;

    /// Requires |phi(p)| small; throws DegenerateGradient on vanishing gradient.
    SurfaceFrame frame_at(const Eigen::Vector3d& p) const;

    /// Signed distance d(x) = (x - pi(x)) . n(pi(x)), positive outside.
    double signed_distance(const Eigen::Vector3d& x) const;

    /// Map used to place base-mesh vertices taken from the unit sphere.
    Eigen::Vector3d from_unit_sphere(const Eigen::Vector3d& s) const;

private:
    SurfaceKind kind_;
};

template <class T>
T LevelSetSurface::phi(const V3<T>& x) const {
    switch (kind_) {
        case SurfaceKind::Sphere:
            return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 1.0;
        case SurfaceKind::Biconcave: {
            constexpr double d2 = kBiconcaveD * kBiconcaveD;
            constexpr double c4 = kBiconcaveC * kBiconcaveC * kBiconcaveC * kBiconcaveC;
            const T s = d2 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            return s * s * s - 8.0 * d2 * (x[1] * x[1] + x[2] * x[2]) - c4;
        }
        case SurfaceKind::Varying: {
            using std::sin;
            const T w = 1.0 + 0.5 * sin(std::numbers::pi * x[0]);
            return 0.25 * x[0] * x[0] + x[1] * x[1] + 4.0 * x[2] * x[2] / (w * w) - 1.0;
        }
    }
    return T(0.0);
}

}  // namespace surfstokes::geometry
