#include "surfstokes/geometry/surface.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace surfstokes::geometry {

SurfaceKind parse_surface_kind(std::string_view name) {
    if (name == "sphere") return SurfaceKind::Sphere;
    if (name == "biconcave") return SurfaceKind::Biconcave;
    if (name == "varying" || name == "varying-curvature") return SurfaceKind::Varying;
    throw Error(ErrorCode::Config, "unknown surface '" + std::string(name) + "'");
}

std::string_view surface_kind_name(SurfaceKind kind) {
    switch (kind) {
        case SurfaceKind::Sphere: return "sphere";
        case SurfaceKind::Biconcave: return "biconcave";
        case SurfaceKind::Varying: return "varying";
    }
    return "?";
}

LevelSetSurface::LevelSetSurface(SurfaceKind kind) : kind_(kind) {}

SecondOrderDual LevelSetSurface::eval_phi(const Eigen::Vector3d& x) const {
    return second_order([this](const auto& y) { return phi(y); }, x);
}

namespace {

// Newton steps along the gradient onto the zero level.
Eigen::Vector3d retract(const LevelSetSurface& surface, Eigen::Vector3d p, int steps) {
    for (int i = 0; i < steps; ++i) {
        const SecondOrderDual f = surface.eval_phi(p);
        const double g2 = f.grad.squaredNorm();
        SURFSTOKES_THROW_IF(g2 < 1e-24, ErrorCode::NonConvergence,
                            "closest_point: vanishing gradient during seeding");
        p -= f.value * f.grad / g2;
        if (std::abs(f.value) < 1e-15) break;
    }
    return p;
}

// Newton on the stationarity system x - p - s grad(phi) = 0, phi(p) = 0.
bool newton_closest(const LevelSetSurface& surface, const Eigen::Vector3d& x, Eigen::Vector3d& p) {
    SecondOrderDual f = surface.eval_phi(p);
    double s = (x - p).dot(f.grad) / f.grad.squaredNorm();
    auto residual = [&](const Eigen::Vector3d& q, double t, const SecondOrderDual& fq) {
        Eigen::Vector4d r;
        r.head<3>() = x - q - t * fq.grad;
        r[3] = fq.value;
        return r;
    };

    Eigen::Vector4d r = residual(p, s, f);
    for (int it = 0; it < 100; ++it) {
        Eigen::Matrix4d jac = Eigen::Matrix4d::Zero();
        jac.topLeftCorner<3, 3>() = -Eigen::Matrix3d::Identity() - s * f.hess;
        jac.topRightCorner<3, 1>() = -f.grad;
        jac.bottomLeftCorner<1, 3>() = f.grad.transpose();
        const Eigen::Vector4d step = jac.partialPivLu().solve(-r);

        // Backtrack until the residual decreases (at most 10 halvings).
        double alpha = 1.0;
        Eigen::Vector3d q;
        double t = 0.0;
        SecondOrderDual fq;
        Eigen::Vector4d rq;
        for (int k = 0; k < 10; ++k) {
            q = p + alpha * step.head<3>();
            t = s + alpha * step[3];
            fq = surface.eval_phi(q);
            rq = residual(q, t, fq);
            if (rq.norm() < r.norm() || rq.norm() < 1e-15) break;
            alpha *= 0.5;
        }
        p = q;
        s = t;
        f = fq;
        r = rq;
        if ((alpha * step).norm() < 1e-13) return true;
    }
    // Roundoff may stall the step just above the tolerance; accept if the
    // residuals themselves are at machine level.
    return std::abs(f.value) < 1e-12 && r.head<3>().norm() < 1e-12;
}

// Riemannian gradient descent of |x - p|^2 / 2 on the surface. Slow but
// robust near the medial axis, where Newton may jump between sheets.
Eigen::Vector3d descend_closest(const LevelSetSurface& surface, const Eigen::Vector3d& x,
                                Eigen::Vector3d p) {
    for (int it = 0; it < 20000; ++it) {
        const SecondOrderDual f = surface.eval_phi(p);
        const Eigen::Vector3d n = f.grad.normalized();
        const Eigen::Vector3d v = x - p;
        const Eigen::Vector3d t = v - v.dot(n) * n;
        if (t.norm() < 1e-10 * (1.0 + v.norm())) break;
        p = retract(surface, p + 0.5 * t, 20);
    }
    return p;
}

}  // namespace

Eigen::Vector3d LevelSetSurface::closest_point(const Eigen::Vector3d& x) const {
    if (kind_ == SurfaceKind::Sphere) {
        const double r = x.norm();
        SURFSTOKES_THROW_IF(r < 1e-12, ErrorCode::NonConvergence,
                            "closest_point: centre of the sphere has no projection");
        return x / r;
    }

    // Gradient-flow seed towards the zero level.
    const Eigen::Vector3d seed = retract(*this, x, 5);
    Eigen::Vector3d p = seed;
    if (newton_closest(*this, x, p)) return p;
    p = descend_closest(*this, x, retract(*this, seed, 20));
    if (newton_closest(*this, x, p)) return p;
    throw Error(ErrorCode::NonConvergence,
                "closest_point: Newton did not converge within 100 iterations");
}

SurfaceFrame LevelSetSurface::frame_at(const Eigen::Vector3d& p) const {
    const SecondOrderDual f = eval_phi(p);
    const double g = f.grad.norm();
    SURFSTOKES_THROW_IF(g < 1e-12, ErrorCode::DegenerateGradient,
                        "frame_at: |grad phi| below 1e-12");
    SurfaceFrame fr;
    fr.point = p;
    fr.normal = f.grad / g;
    fr.projector = Eigen::Matrix3d::Identity() - fr.normal * fr.normal.transpose();
    fr.weingarten = fr.projector * (f.hess / g) * fr.projector;
    fr.weingarten = 0.5 * (fr.weingarten + fr.weingarten.transpose()).eval();
    fr.mean_curvature = fr.weingarten.trace();
    return fr;
}

double LevelSetSurface::signed_distance(const Eigen::Vector3d& x) const {
    const Eigen::Vector3d p = closest_point(x);
    const Eigen::Vector3d n = frame_at(p).normal;
    return (x - p).dot(n);
}

Eigen::Vector3d LevelSetSurface::from_unit_sphere(const Eigen::Vector3d& s) const {
    switch (kind_) {
        case SurfaceKind::Sphere:
            return s.normalized();
        case SurfaceKind::Biconcave:
            return closest_point(s);
        case SurfaceKind::Varying: {
            const Eigen::Vector3d y(2.0 * s[0], s[1],
                                    0.5 * s[2] * (1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * s[0])));
            return closest_point(y);
        }
    }
    return s;
}

}  // namespace surfstokes::geometry
