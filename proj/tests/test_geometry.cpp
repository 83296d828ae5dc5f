#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "surfstokes/geometry/exact_fields.hpp"
#include "surfstokes/geometry/surface.hpp"

using namespace surfstokes;
using namespace surfstokes::geometry;

namespace {

const SurfaceKind kKinds[] = {SurfaceKind::Sphere, SurfaceKind::Biconcave, SurfaceKind::Varying};

Eigen::Vector3d random_direction(std::mt19937& rng) {
    std::normal_distribution<double> g;
    Eigen::Vector3d v(g(rng), g(rng), g(rng));
    return v.normalized();
}

Eigen::Vector3d random_surface_point(const LevelSetSurface& s, std::mt19937& rng) {
    return s.from_unit_sphere(random_direction(rng));
}

// Projected gradient descent on |x - p|^2 over {phi = 0}; each step is
// followed by a normal Newton correction back onto the level set.
Eigen::Vector3d descent_projection(const LevelSetSurface& s, const Eigen::Vector3d& x) {
    auto phi_grad = [&](const Eigen::Vector3d& p, double& value) {
        const auto vg = value_grad([&](const auto& y) { return s.phi(y); }, to_v3(p));
        value = vg.value;
        return to_eigen(vg.grad);
    };
    auto to_surface = [&](Eigen::Vector3d p) {
        for (int i = 0; i < 50; ++i) {
            double v = 0.0;
            const Eigen::Vector3d g = phi_grad(p, v);
            p -= v * g / g.squaredNorm();
            if (std::abs(v) < 1e-15) break;
        }
        return p;
    };
    Eigen::Vector3d p = to_surface(x);
    const double step = 0.5;
    for (int it = 0; it < 100000; ++it) {
        double v = 0.0;
        const Eigen::Vector3d n = phi_grad(p, v).normalized();
        const Eigen::Vector3d r = (x - p) - (x - p).dot(n) * n;
        if (r.norm() < 1e-12) break;
        p = to_surface(p + step * r);
    }
    return p;
}

}  // namespace

TEST(EvalPhi, ClosedFormValues) {
    const LevelSetSurface sphere(SurfaceKind::Sphere);
    const SecondOrderDual a = sphere.eval_phi({2, 0, 0});
    EXPECT_DOUBLE_EQ(a.value, 3.0);
    EXPECT_TRUE(a.grad.isApprox(Eigen::Vector3d(4, 0, 0)));
    const SecondOrderDual b = sphere.eval_phi({1, 0, 0});
    EXPECT_DOUBLE_EQ(b.value, 0.0);
    EXPECT_TRUE(b.hess.isApprox(2.0 * Eigen::Matrix3d::Identity()));

    const LevelSetSurface bic(SurfaceKind::Biconcave);
    const double expected = std::pow(0.91, 6) - std::pow(0.95, 4);
    EXPECT_NEAR(bic.eval_phi(Eigen::Vector3d::Zero()).value, expected, 1e-15);
    EXPECT_LT(expected, 0.0);
}

TEST(EvalPhi, NegativeInsideAtOrigin) {
    for (SurfaceKind k : kKinds) EXPECT_LT(LevelSetSurface(k).eval_phi(Eigen::Vector3d::Zero()).value, 0.0);
}

TEST(SecondOrderDual, ExactOnPolynomials) {
    // f = x0^3 x1 + 2 x1 x2^2 - 7 x0 x2
    auto f = [](const auto& x) { return x[0] * x[0] * x[0] * x[1] + 2.0 * x[1] * x[2] * x[2] - 7.0 * x[0] * x[2]; };
    const Eigen::Vector3d x(0.3, -1.2, 0.7);
    const SecondOrderDual d = second_order(f, x);
    const double x0 = x[0], x1 = x[1], x2 = x[2];
    EXPECT_NEAR(d.value, x0 * x0 * x0 * x1 + 2 * x1 * x2 * x2 - 7 * x0 * x2, 1e-15);
    const Eigen::Vector3d g(3 * x0 * x0 * x1 - 7 * x2, x0 * x0 * x0 + 2 * x2 * x2, 4 * x1 * x2 - 7 * x0);
    EXPECT_LT((d.grad - g).norm(), 1e-14);
    Eigen::Matrix3d h;
    h << 6 * x0 * x1, 3 * x0 * x0, -7, 3 * x0 * x0, 0, 4 * x2, -7, 4 * x2, 4 * x1;
    EXPECT_LT((d.hess - h).norm(), 1e-14);
}

TEST(SecondOrderDual, MatchesFiniteDifferencesOnRandomComposites) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::array<double, 8> a{};
        for (double& c : a) c = u(rng);
        auto f = [a](const auto& x) {
            using std::cos;
            using std::exp;
            using std::sin;
            using std::sqrt;
            return a[0] * x[0] * x[0] * x[1] + sin(a[1] * x[2] + a[2] * x[0]) * cos(a[3] * x[1]) +
                   exp(a[4] * x[0] * x[2]) / (1.0 + x[1] * x[1]) +
                   a[5] * sqrt(1.0 + x[0] * x[0] + a[6] * a[6] * x[2] * x[2]) + a[7] * ipow(x[1] - x[2], 3);
        };
        const Eigen::Vector3d x(u(rng), u(rng), u(rng));
        const SecondOrderDual d = second_order(f, x);
        auto fv = [&](const Eigen::Vector3d& y) { return f(to_v3(y)); };
        const double h = 1e-5;
        Eigen::Vector3d g;
        Eigen::Matrix3d hess;
        for (int i = 0; i < 3; ++i) {
            const Eigen::Vector3d ei = h * Eigen::Vector3d::Unit(i);
            g[i] = (fv(x + ei) - fv(x - ei)) / (2 * h);
            for (int j = 0; j < 3; ++j) {
                const Eigen::Vector3d ej = h * Eigen::Vector3d::Unit(j);
                hess(i, j) = (fv(x + ei + ej) - fv(x + ei - ej) - fv(x - ei + ej) + fv(x - ei - ej)) / (4 * h * h);
            }
        }
        EXPECT_LT((d.grad - g).norm(), 1e-6 * std::max(1.0, g.norm())) << "trial " << trial;
        EXPECT_LT((d.hess - hess).norm(), 1e-4 * std::max(1.0, hess.norm())) << "trial " << trial;
    }
}

TEST(ClosestPoint, SphereRadial) {
    const LevelSetSurface s(SurfaceKind::Sphere);
    EXPECT_LT((s.closest_point({2, 0, 0}) - Eigen::Vector3d(1, 0, 0)).norm(), 1e-15);
    EXPECT_THROW(s.closest_point(Eigen::Vector3d::Zero()), Error);
}

TEST(ClosestPoint, BiconcaveAgainstDescentOracle) {
    const LevelSetSurface s(SurfaceKind::Biconcave);
    const Eigen::Vector3d x(1, 0, 0);
    const Eigen::Vector3d p = s.closest_point(x);
    EXPECT_LT(std::abs(s.eval_phi(p).value), 1e-12);
    EXPECT_LT((s.frame_at(p).projector * (x - p)).norm(), 1e-10);
    const Eigen::Vector3d q = descent_projection(s, x);
    EXPECT_LT((p - q).norm(), 1e-9);
}

TEST(ClosestPoint, BiconcaveCentreIsDegenerate) {
    const LevelSetSurface s(SurfaceKind::Biconcave);
    try {
        s.closest_point(Eigen::Vector3d::Zero());
        FAIL() << "expected NonConvergence";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonConvergence);
    }
}

TEST(ClosestPoint, IdempotentWithSmallResidualsInBand) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> band(-0.1, 0.1);
    for (SurfaceKind k : kKinds) {
        const LevelSetSurface s(k);
        for (int i = 0; i < 1000; ++i) {
            const Eigen::Vector3d p0 = random_surface_point(s, rng);
            const Eigen::Vector3d x = p0 + band(rng) * s.frame_at(p0).normal;
            const Eigen::Vector3d p = s.closest_point(x);
            ASSERT_LT(std::abs(s.eval_phi(p).value), 1e-12) << surface_kind_name(k);
            ASSERT_LT((s.frame_at(p).projector * (x - p)).norm(), 1e-10) << surface_kind_name(k);
            ASSERT_LT((s.closest_point(p) - p).norm(), 1e-12) << surface_kind_name(k);
        }
    }
}

TEST(Frame, SpherePoleAndSpectrum) {
    const LevelSetSurface s(SurfaceKind::Sphere);
    const SurfaceFrame f = s.frame_at({0, 0, 1});
    EXPECT_LT((f.normal - Eigen::Vector3d(0, 0, 1)).norm(), 1e-15);
    EXPECT_LT((f.weingarten - f.projector).norm(), 1e-14);
    EXPECT_NEAR(f.mean_curvature, 2.0, 1e-14);

    std::mt19937 rng(3);
    for (int i = 0; i < 50; ++i) {
        const SurfaceFrame g = s.frame_at(random_direction(rng));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g.weingarten);
        EXPECT_NEAR(es.eigenvalues()[0], 0.0, 1e-10);
        EXPECT_NEAR(es.eigenvalues()[1], 1.0, 1e-10);
        EXPECT_NEAR(es.eigenvalues()[2], 1.0, 1e-10);
    }
}

TEST(Frame, IdentitiesAtRandomPoints) {
    std::mt19937 rng(5);
    for (SurfaceKind k : kKinds) {
        const LevelSetSurface s(k);
        for (int i = 0; i < 1000; ++i) {
            const SurfaceFrame f = s.frame_at(random_surface_point(s, rng));
            ASSERT_NEAR(f.normal.norm(), 1.0, 1e-12);
            ASSERT_LT((f.projector * f.projector - f.projector).norm(), 1e-12);
            ASSERT_LT((f.projector - f.projector.transpose()).norm(), 1e-12);
            ASSERT_LT((f.weingarten * f.normal).norm(), 1e-10);
            ASSERT_LT((f.projector * f.weingarten * f.projector - f.weingarten).norm(), 1e-10);
            ASSERT_NEAR(f.mean_curvature, f.weingarten.trace(), 1e-14);
        }
    }
}

TEST(Frame, BiconcaveWeingartenMatchesNormalDifferences) {
    const LevelSetSurface s(SurfaceKind::Biconcave);
    std::mt19937 rng(9);
    auto normal = [&](const Eigen::Vector3d& x) { return Eigen::Vector3d(s.eval_phi(x).grad.normalized()); };
    for (int i = 0; i < 20; ++i) {
        const Eigen::Vector3d p = random_surface_point(s, rng);
        const SurfaceFrame f = s.frame_at(p);
        Eigen::Matrix3d dn;
        const double h = 1e-5;
        for (int j = 0; j < 3; ++j) {
            const Eigen::Vector3d e = h * Eigen::Vector3d::Unit(j);
            dn.col(j) = (normal(p + e) - normal(p - e)) / (2 * h);
        }
        const Eigen::Matrix3d fd = f.projector * dn * f.projector;
        EXPECT_LT((fd - f.weingarten).norm(), 1e-6 * std::max(1.0, fd.norm()));
    }
}

TEST(Frame, DegenerateGradient) {
    const LevelSetSurface s(SurfaceKind::Biconcave);
    try {
        s.frame_at(Eigen::Vector3d::Zero());
        FAIL() << "expected DegenerateGradient";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateGradient);
    }
}

TEST(ExactFields, SphereValuesAtPole) {
    const ExactSolution ex(LevelSetSurface(SurfaceKind::Sphere), MultiplierChoice::Linear, 1.0);
    const ExactPoint e = ex.evaluate({0, 0, 1});
    EXPECT_LT((e.u - Eigen::Vector3d(-1, 0, 0)).norm(), 1e-15);
    EXPECT_DOUBLE_EQ(e.p, 1.0);
    EXPECT_DOUBLE_EQ(e.lambda, 1.0);
}

TEST(ExactFields, VelocityTangentialEverywhere) {
    std::mt19937 rng(21);
    for (SurfaceKind k : kKinds) {
        const LevelSetSurface s(k);
        const ExactSolution ex(s, MultiplierChoice::Linear, 1.0);
        for (int i = 0; i < 100; ++i) {
            const Eigen::Vector3d p = random_surface_point(s, rng);
            const ExactPoint e = ex.evaluate(p);
            EXPECT_LT(std::abs(e.u.dot(s.frame_at(p).normal)), 1e-12);
            EXPECT_LT((e.grad_u * s.frame_at(p).normal).norm(), 1e-12);
        }
    }
}

TEST(ExactFields, StreamFunctionFieldsAreSolenoidal) {
    std::mt19937 rng(22);
    for (SurfaceKind k : {SurfaceKind::Biconcave, SurfaceKind::Varying}) {
        const LevelSetSurface s(k);
        const ExactSolution ex(s, MultiplierChoice::Linear, 1.0);
        for (int i = 0; i < 50; ++i) EXPECT_LT(std::abs(ex.divergence(random_surface_point(s, rng))), 1e-10);
    }
}

TEST(SurfaceOperators, KillingFieldsOnSphere) {
    const LevelSetSurface s(SurfaceKind::Sphere);
    std::mt19937 rng(17);
    for (int axis = 0; axis < 3; ++axis) {
        auto v = [axis](const auto& x) {
            using T = std::decay_t<decltype(x[0])>;
            V3<T> e{T(0.0), T(0.0), T(0.0)};
            e[axis] = T(1.0);
            return cross(e, x);
        };
        for (int i = 0; i < 20; ++i) {
            const auto ops = vector_surface_operators(s, v, random_direction(rng));
            EXPECT_LT(ops.strain.norm(), 1e-12);
            EXPECT_LT(std::abs(ops.div), 1e-12);
            EXPECT_LT(ops.div_strain.norm(), 1e-11);
        }
    }
}

TEST(SurfaceOperators, GradientVanishesAtPole) {
    const LevelSetSurface s(SurfaceKind::Sphere);
    const auto ops = scalar_surface_operators(s, [](const auto& x) { return x[2]; }, Eigen::Vector3d(0, 0, 1));
    EXPECT_LT(ops.grad.norm(), 1e-15);
}

TEST(SurfaceOperators, CovariantTraceEqualsDivergence) {
    std::mt19937 rng(8);
    for (SurfaceKind k : kKinds) {
        const LevelSetSurface s(k);
        auto v = [&s](const auto& x) {
            using std::sin;
            const auto n = s.normal_extension(x);
            decltype(n) w{sin(x[1]) * x[2], x[0] * x[0] - x[2], x[0] * x[1] * x[2] + 1.0};
            return project_tangent(n, w);
        };
        for (int i = 0; i < 50; ++i) {
            const auto ops = vector_surface_operators(s, v, random_surface_point(s, rng));
            EXPECT_NEAR(ops.cov.trace(), ops.grad.trace(), 1e-10);
        }
    }
}

TEST(ManufacturedRhs, NormalBalanceWithZeroMultiplier) {
    std::mt19937 rng(31);
    for (SurfaceKind k : kKinds) {
        const LevelSetSurface s(k);
        const ExactSolution ex(s, MultiplierChoice::Zero, 1.0);
        for (int i = 0; i < 10; ++i) {
            const Eigen::Vector3d p = random_surface_point(s, rng);
            const Eigen::Vector3d n = s.frame_at(p).normal;
            const ExactPoint e = ex.evaluate(p);
            const double lhs = ex.rhs(p).dot(n);
            const double rhs = n.dot(-2.0 * ex.div_strain(p) + e.grad_p);
            EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST(ManufacturedRhs, ZeroViscosity) {
    std::mt19937 rng(32);
    for (SurfaceKind k : kKinds) {
        const LevelSetSurface s(k);
        const ExactSolution ex(s, MultiplierChoice::Linear, 0.0);
        for (int i = 0; i < 10; ++i) {
            const Eigen::Vector3d p = random_surface_point(s, rng);
            const ExactPoint e = ex.evaluate(p);
            const Eigen::Vector3d expected = e.u + e.lambda * s.frame_at(p).normal + e.grad_p;
            EXPECT_LT((ex.rhs(p) - expected).norm(), 1e-13);
        }
    }
}

// Strong operator on the sphere from fourth-order central differences of
// the normal-constant extensions u(x/|x|), p(x/|x|).
TEST(ManufacturedRhs, SphereMatchesFiniteDifferenceOracle) {
    const double mu = 0.7;
    const ExactSolution ex(LevelSetSurface(SurfaceKind::Sphere), MultiplierChoice::Linear, mu);
    auto proj = [](const Eigen::Vector3d& x) {
        const Eigen::Vector3d n = x.normalized();
        return Eigen::Matrix3d(Eigen::Matrix3d::Identity() - n * n.transpose());
    };
    auto u_ext = [&](const Eigen::Vector3d& x) {
        const Eigen::Vector3d p = x.normalized();
        return Eigen::Vector3d(proj(p) * Eigen::Vector3d(-p[2] * p[2], p[1], p[0]));
    };
    auto p_ext = [](const Eigen::Vector3d& x) {
        const Eigen::Vector3d p = x.normalized();
        return p[0] * p[1] * p[1] + p[2];
    };
    const double h = 1e-4;
    auto d = [h](const auto& f, const Eigen::Vector3d& x, int l) {
        const Eigen::Vector3d e = h * Eigen::Vector3d::Unit(l);
        using R = std::decay_t<decltype(f(x))>;
        return R((-f(x + 2 * e) + 8.0 * f(x + e) - 8.0 * f(x - e) + f(x - 2 * e)) / (12.0 * h));
    };
    auto strain = [&](const Eigen::Vector3d& x) {
        Eigen::Matrix3d g;
        for (int l = 0; l < 3; ++l) g.col(l) = d(u_ext, x, l);
        const Eigen::Matrix3d c = proj(x) * g * proj(x);
        return Eigen::Matrix3d(0.5 * (c + c.transpose()));
    };
    std::mt19937 rng(41);
    for (int i = 0; i < 10; ++i) {
        const Eigen::Vector3d p = random_direction(rng);
        const Eigen::Matrix3d P = proj(p);
        std::array<Eigen::Matrix3d, 3> de;
        for (int l = 0; l < 3; ++l) de[l] = d(strain, p, l);
        Eigen::Vector3d div = Eigen::Vector3d::Zero();
        for (int a = 0; a < 3; ++a)
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l) div[a] += de[l](a, j) * P(j, l);
        Eigen::Vector3d gp;
        for (int l = 0; l < 3; ++l) gp[l] = d(p_ext, p, l);
        const Eigen::Vector3d f_fd = -2.0 * mu * div + u_ext(p) + (p.sum()) * p + P * gp;
        const Eigen::Vector3d f = ex.rhs(p);
        EXPECT_LT((f - f_fd).norm(), 1e-6 * f_fd.norm());
        EXPECT_NEAR(f.norm(), f_fd.norm(), 1e-6 * f_fd.norm());
    }
}
