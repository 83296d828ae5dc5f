#include "surfstokes/geometry/exact_fields.hpp"

#include <string>

namespace surfstokes::geometry {

MultiplierChoice parse_multiplier_choice(std::string_view name) {
    if (name == "zero") return MultiplierChoice::Zero;
    if (name == "linear") return MultiplierChoice::Linear;
    throw Error(ErrorCode::Config, "unknown lambda-exact choice '" + std::string(name) + "'");
}

ExactSolution::ExactSolution(const LevelSetSurface& surface, MultiplierChoice multiplier,
                             double mu)
    : surface_(surface), multiplier_(multiplier), mu_(mu) {
    SURFSTOKES_THROW_IF(!(mu >= 0.0), ErrorCode::Config, "viscosity mu must be nonnegative");
}

ExactPoint ExactSolution::evaluate(const Eigen::Vector3d& p) const {
    const auto v = [this](const auto& y) { return velocity(y); };
    const auto q = [this](const auto& y) { return pressure(y); };
    const SurfaceFrame fr = surface_.frame_at(p);
    const V3<double> x = to_v3(p);
    const auto vj = vector_jacobian(v, x);
    const ScalarSurfaceOperators ps = scalar_surface_operators(surface_, q, p);

    ExactPoint out;
    out.u = to_eigen(vj.value);
    out.grad_u = to_eigen(vj.jac) * fr.projector;
    out.p = ps.value;
    out.grad_p = ps.grad;
    out.lambda = multiplier(x);
    out.div_u = out.grad_u.trace();
    return out;
}

Eigen::Matrix3d ExactSolution::strain(const Eigen::Vector3d& p) const {
    const auto v = [this](const auto& y) { return velocity(y); };
    return vector_surface_operators(surface_, v, p).strain;
}

Eigen::Vector3d ExactSolution::div_strain(const Eigen::Vector3d& p) const {
    const auto v = [this](const auto& y) { return velocity(y); };
    return vector_surface_operators(surface_, v, p).div_strain;
}

Eigen::Vector3d ExactSolution::rhs(const Eigen::Vector3d& p) const {
    const auto v = [this](const auto& y) { return velocity(y); };
    const VectorSurfaceOperators ops = vector_surface_operators(surface_, v, p);
    const ScalarSurfaceOperators ps =
        scalar_surface_operators(surface_, [this](const auto& y) { return pressure(y); }, p);
    const Eigen::Vector3d n = surface_.frame_at(p).normal;
    return -2.0 * mu_ * ops.div_strain + ops.value + multiplier(to_v3(p)) * n + ps.grad;
}

}  // namespace surfstokes::geometry
