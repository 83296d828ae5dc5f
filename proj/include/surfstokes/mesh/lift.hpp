#pragma once

#include <Eigen/Core>

#include "surfstokes/geometry/surface.hpp"
#include "surfstokes/mesh/curved_mesh.hpp"

namespace surfstokes::mesh {

/// Closest-point data of a point x near the surface.
struct Lift {
    Eigen::Vector3d point;     // pi(x)
    double distance = 0.0;     // signed distance d(x)
    geometry::SurfaceFrame frame;  // frame at pi(x)
    Eigen::Matrix3d jacobian;  // grad pi(x) = P (I + d H)^{-1}
};

Lift lift_point(const geometry::LevelSetSurface& surface, const Eigen::Vector3d& x);

/// Area deformation mu_h = |grad pi J_0 x grad pi J_1| / |J_0 x J_1| at an
/// element point.
double area_ratio(const Lift& lift, const ElementPoint& geo);

}  // namespace surfstokes::mesh
