#include "surfstokes/mesh/lift.hpp"

#include <Eigen/Dense>

namespace surfstokes::mesh {

Lift lift_point(const geometry::LevelSetSurface& surface, const Eigen::Vector3d& x) {
    Lift out;
    out.point = surface.closest_point(x);
    out.frame = surface.frame_at(out.point);
    out.distance = (x - out.point).dot(out.frame.normal);
    const Eigen::Matrix3d m = Eigen::Matrix3d::Identity() + out.distance * out.frame.weingarten;
    out.jacobian = out.frame.projector * m.inverse();
    return out;
}

double area_ratio(const Lift& lift, const ElementPoint& geo) {
    const Eigen::Matrix<double, 3, 2> lj = lift.jacobian * geo.jac;
    return lj.col(0).cross(lj.col(1)).norm() / geo.area;
}

}  // namespace surfstokes::mesh
