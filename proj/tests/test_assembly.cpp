#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "dense_oracle.hpp"
#include "surfstokes/assembly/forms.hpp"
#include "surfstokes/assembly/system.hpp"
#include "surfstokes/errors.hpp"
#include "surfstokes/linalg/diagnostics.hpp"
#include "surfstokes/mesh/lift.hpp"

using namespace surfstokes;
using assembly::Method;
using geometry::SurfaceKind;

namespace {

assembly::SystemConfig config(SurfaceKind s, Method m, int ku, int klambda, int kg) {
    assembly::SystemConfig c;
    c.surface = s;
    c.method = m;
    c.ku = ku;
    c.kpr = ku - 1;
    c.klambda = klambda;
    c.kg = kg;
    c.kp = kg + 1;
    if (m == Method::Penalty) c.multiplier = geometry::MultiplierChoice::Zero;
    return c;
}

double area(const fem::GeometryCache& geo) {
    double a = 0.0;
    for (int e = 0; e < geo.num_elements(); ++e)
        for (int q = 0; q < geo.points_per_element(); ++q) a += geo.dx(e, q);
    return a;
}

Eigen::VectorXd constant_field(const fem::FunctionSpace& s, const Eigen::Vector3d& c) {
    return fem::interpolate(s, fem::VectorField([&](const Eigen::Vector3d&) { return c; }),
                            fem::NodeEvaluation::Discrete);
}

Eigen::VectorXd ones(const fem::FunctionSpace& s) {
    return fem::interpolate(s, fem::ScalarField([](const Eigen::Vector3d&) { return 1.0; }),
                            fem::NodeEvaluation::Discrete);
}

// Dense oracle for the literal saddle system (zero alpha-alpha entry).
struct DenseReference {
    Eigen::VectorXd x;
    bool nonsingular = false;
};

DenseReference dense_solve(const assembly::SaddleSystem& s) {
    DenseReference r;
    r.nonsingular = oracle::gauss_solve(s.matrix().to_dense(), s.rhs(), r.x);
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Bilinear forms

TEST(AssembleA, ConstantFieldEnergyIsAreaTimesNormSquared) {
    const assembly::Discretization d(config(SurfaceKind::Biconcave, Method::Lagrange, 2, 1, 2), 1);
    const auto a = assembly::assemble_a(d.velocity(), d.geometry(), 1.0);
    const Eigen::Vector3d c(1.0, -2.0, 0.5);
    const Eigen::VectorXd v = constant_field(d.velocity(), c);
    EXPECT_NEAR(v.dot(a.multiply(v)), area(d.geometry()) * c.squaredNorm(), 1e-12 * c.squaredNorm());
}

TEST(AssembleA, ExactlySymmetricAndPositiveDefinite) {
    const assembly::Discretization d(config(SurfaceKind::Sphere, Method::Lagrange, 2, 1, 2), 1);
    const auto a = assembly::assemble_a(d.velocity(), d.geometry(), 1.0);
    EXPECT_EQ(a.asymmetry(), 0.0);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a.to_dense()).eigenvalues();
    EXPECT_GT(ev.minCoeff(), 0.0);
}

TEST(AssembleA, EnergyOfInterpolantConvergesToExactEnergy) {
    // a(u, u) on the exact surface: integral over Gamma_h of the lifted
    // integrand times the area deformation, on a fine quartic geometry.
    const geometry::LevelSetSurface surf(SurfaceKind::Sphere);
    const geometry::ExactSolution ex(surf, geometry::MultiplierChoice::Linear, 1.0);
    double exact = 0.0;
    {
        const mesh::CurvedMesh m(mesh::icosphere(4), surf, 4);
        const fem::GeometryCache geo(m, fem::make_quadrature(12), 4);
        for (int e = 0; e < geo.num_elements(); ++e)
            for (int q = 0; q < geo.points_per_element(); ++q) {
                const mesh::Lift lift = mesh::lift_point(surf, geo.at(e, q).x);
                const Eigen::Vector3d u = ex.evaluate(lift.point).u;
                exact += geo.dx(e, q) * mesh::area_ratio(lift, geo.at(e, q)) *
                         (2.0 * ex.strain(lift.point).squaredNorm() + u.squaredNorm());
            }
    }
    const int kg = 2;
    std::vector<double> hs, es;
    for (int level = 1; level <= 3; ++level) {
        const assembly::Discretization d(config(SurfaceKind::Sphere, Method::Lagrange, 2, 1, kg), level);
        const auto a = assembly::assemble_a(d.velocity(), d.geometry(), 1.0);
        const Eigen::VectorXd ui = fem::interpolate(
            d.velocity(), fem::VectorField([&](const Eigen::Vector3d& p) { return ex.evaluate(p).u; }));
        hs.push_back(d.mesh().h());
        es.push_back(std::abs(ui.dot(a.multiply(ui)) - exact));
    }
    EXPECT_GE(oracle::loglog_slope(hs, es), kg - 0.3);
}

TEST(AssembleB, ConstantPressureRowsCancel) {
    const assembly::Discretization d(config(SurfaceKind::Varying, Method::Lagrange, 3, 2, 3), 1);
    const auto bp = assembly::assemble_b_pressure(d.velocity(), d.pressure(), d.geometry());
    const Eigen::VectorXd combo = bp.multiply_transpose(ones(d.pressure()));
    EXPECT_LT(combo.lpNorm<Eigen::Infinity>(), 1e-13);
}

TEST(AssembleB, MultiplierBlockOnExactTangentialFieldDecays) {
    const geometry::ExactSolution ex(geometry::LevelSetSurface(SurfaceKind::Sphere),
                                     geometry::MultiplierChoice::Linear, 1.0);
    const int kg = 3;
    std::vector<double> hs, es;
    for (int level = 1; level <= 3; ++level) {
        const assembly::Discretization d(config(SurfaceKind::Sphere, Method::Lagrange, 3, 2, kg), level);
        const auto bl = assembly::assemble_b_multiplier(d.velocity(), d.multiplier(), d.geometry());
        const Eigen::VectorXd ui = fem::interpolate(
            d.velocity(), fem::VectorField([&](const Eigen::Vector3d& p) { return ex.evaluate(p).u; }));
        hs.push_back(d.mesh().h());
        es.push_back(bl.multiply(ui).lpNorm<Eigen::Infinity>());
    }
    EXPECT_GE(oracle::loglog_slope(hs, es), kg);
}

TEST(AssembleMean, SumsToDiscreteArea) {
    for (SurfaceKind k : {SurfaceKind::Sphere, SurfaceKind::Biconcave, SurfaceKind::Varying}) {
        const assembly::Discretization d(config(k, Method::Lagrange, 2, 1, 2), 1);
        const Eigen::VectorXd m = assembly::assemble_mean(d.pressure(), d.geometry());
        const double a = area(d.geometry());
        EXPECT_NEAR(m.dot(ones(d.pressure())), a, 1e-12 * a);
    }
}

TEST(AssembleRhs, ZeroAndConstantLoads) {
    const assembly::Discretization d(config(SurfaceKind::Biconcave, Method::Lagrange, 2, 1, 2), 1);
    const auto& geo = d.geometry();
    const std::size_t nq = static_cast<std::size_t>(geo.num_elements()) * geo.points_per_element();
    const Eigen::VectorXd zero =
        assembly::assemble_vector_load(d.velocity(), geo, std::vector<Eigen::Vector3d>(nq, Eigen::Vector3d::Zero()));
    EXPECT_EQ(zero.lpNorm<Eigen::Infinity>(), 0.0);
    const Eigen::Vector3d c(0.25, -1.0, 3.0);
    const Eigen::VectorXd f = assembly::assemble_vector_load(d.velocity(), geo, std::vector<Eigen::Vector3d>(nq, c));
    const double a = area(geo);
    for (int comp = 0; comp < 3; ++comp) {
        Eigen::Vector3d unit = Eigen::Vector3d::Zero();
        unit[comp] = 1.0;
        EXPECT_NEAR(f.dot(constant_field(d.velocity(), unit)), c[comp] * a, 1e-12 * a * c.norm());
    }
}

TEST(AssembleRhs, NormalLoadIsNearlyOrthogonalToTangentialFields) {
    // rhs of f = n against the interpolant of a tangential field decays
    // like the normal error.
    const geometry::ExactSolution ex(geometry::LevelSetSurface(SurfaceKind::Biconcave),
                                     geometry::MultiplierChoice::Linear, 1.0);
    const int kg = 2;
    std::vector<double> hs, es;
    for (int level = 1; level <= 3; ++level) {
        const assembly::Discretization d(config(SurfaceKind::Biconcave, Method::Lagrange, 2, 1, kg), level);
        const auto rhs = assembly::assemble_rhs(d.velocity(), d.geometry(), [&](const Eigen::Vector3d& p) {
            return Eigen::Vector3d(d.surface().frame_at(p).normal);
        });
        const Eigen::VectorXd ui = fem::interpolate(
            d.velocity(), fem::VectorField([&](const Eigen::Vector3d& p) { return ex.evaluate(p).u; }));
        hs.push_back(d.mesh().h());
        es.push_back(std::abs(rhs.dot(ui)));
    }
    EXPECT_GE(oracle::loglog_slope(hs, es), kg - 0.4);
}

TEST(AssemblePenalty, ZeroEtaAndPositiveSemidefinite) {
    const assembly::Discretization d(config(SurfaceKind::Biconcave, Method::Penalty, 2, 1, 2), 1);
    const fem::FunctionSpace normal_space(d.mesh(), 3, 3);
    const auto zero = assembly::assemble_penalty(d.velocity(), normal_space, d.geometry(), 0.0);
    for (double v : zero.values()) EXPECT_EQ(v, 0.0);
    const auto pen = assembly::assemble_penalty(d.velocity(), normal_space, d.geometry(), d.eta());
    EXPECT_EQ(pen.asymmetry(), 0.0);
    std::mt19937 rng(1);
    std::normal_distribution<double> g;
    for (int k = 0; k < 100; ++k) {
        const Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(pen.rows(), [&] { return g(rng); });
        EXPECT_GE(x.dot(pen.multiply(x)), -1e-12 * x.squaredNorm() * d.eta());
    }
}

TEST(AssemblePenalty, ImprovedNormalErrorOrderKpPlusOne) {
    // Flat elements: on curved sphere elements with kp = kg the normalized
    // interpolant reproduces x / |x| exactly.
    const geometry::LevelSetSurface surf(SurfaceKind::Sphere);
    for (int kp : {2, 3}) {
        std::vector<double> hs, es;
        for (int level = 1; level <= 3; ++level) {
            const mesh::CurvedMesh m(mesh::base_mesh_for(surf, level), surf, 1);
            const fem::GeometryCache geo(m, fem::make_quadrature(6));
            const fem::FunctionSpace ns(m, kp, 3);
            const std::vector<Eigen::Vector3d> nt = assembly::improved_normal(ns, geo);
            double err = 0.0;
            for (int e = 0; e < geo.num_elements(); ++e)
                for (int q = 0; q < geo.points_per_element(); ++q) {
                    const mesh::Lift lift = mesh::lift_point(surf, geo.at(e, q).x);
                    err = std::max(err, (nt[e * geo.points_per_element() + q] - lift.frame.normal).norm());
                }
            hs.push_back(m.h());
            es.push_back(err);
        }
        EXPECT_GE(oracle::loglog_slope(hs, es), kp + 1 - 0.4) << "kp=" << kp;
    }
}

TEST(Assembly, IndependentOfTraversalOrderAndThreads) {
    const assembly::Discretization d(config(SurfaceKind::Varying, Method::Lagrange, 2, 2, 2), 1);
    assembly::AssemblyOptions shuffled;
    shuffled.threads = 4;
    shuffled.traversal.resize(d.mesh().num_elements());
    for (int i = 0; i < d.mesh().num_elements(); ++i) shuffled.traversal[i] = i;
    std::shuffle(shuffled.traversal.begin(), shuffled.traversal.end(), std::mt19937(8));
    const auto s1 = assembly::build_system(d);
    const auto s2 = assembly::build_system(d, shuffled);
    EXPECT_EQ(s1.A.values(), s2.A.values());
    EXPECT_EQ(s1.A.col_idx(), s2.A.col_idx());
    EXPECT_EQ(s1.B_p.values(), s2.B_p.values());
    EXPECT_EQ(s1.B_l.values(), s2.B_l.values());
    EXPECT_EQ(s1.rhs(), s2.rhs());
}

// ---------------------------------------------------------------------------
// Saddle system

TEST(SaddleSystem, SizesAndSymmetry) {
    const assembly::Discretization d(config(SurfaceKind::Sphere, Method::Lagrange, 2, 1, 2), 1);
    const auto s = assembly::build_system(d);
    EXPECT_EQ(s.size(), d.velocity().num_dofs() + d.pressure().num_dofs() + d.multiplier().num_dofs() + 1);
    EXPECT_EQ(s.n_u(), 3 * d.velocity().num_nodes());
    EXPECT_EQ(s.matrix().asymmetry(), 0.0);
    EXPECT_NEAR(s.area, area(d.geometry()), 1e-12 * s.area);
}

TEST(SaddleSystem, InertiaMatchesEigenOracleAndCongruence) {
    for (const auto& c : {config(SurfaceKind::Sphere, Method::Lagrange, 2, 1, 2),
                          config(SurfaceKind::Biconcave, Method::Lagrange, 2, 2, 3),
                          config(SurfaceKind::Varying, Method::Penalty, 2, 1, 2)}) {
        const assembly::Discretization d(c, 0);
        const auto s = assembly::build_system(d);
        const auto sol = assembly::solve(s);
        const linalg::Inertia expected{s.n_u() + 1, s.n_p() + s.n_l(), 0};
        EXPECT_EQ(sol.inertia, expected);
        EXPECT_EQ(oracle::eigen_inertia(s.matrix().to_dense()), expected);
    }
}

TEST(SaddleSystem, SparseSolveMatchesDenseOracle) {
    for (const auto& c : {config(SurfaceKind::Sphere, Method::Lagrange, 2, 1, 2),
                          config(SurfaceKind::Biconcave, Method::Lagrange, 2, 2, 2),
                          config(SurfaceKind::Biconcave, Method::Penalty, 2, 1, 2)}) {
        const assembly::Discretization d(c, 1);
        const auto s = assembly::build_system(d);
        ASSERT_LE(s.size(), 3000);
        const auto ref = dense_solve(s);
        ASSERT_TRUE(ref.nonsingular);
        const auto sol = assembly::solve(s);
        const int nu = s.n_u(), np = s.n_p(), nl = s.n_l();
        EXPECT_LT((sol.u - ref.x.head(nu)).norm(), 1e-8 * ref.x.head(nu).norm());
        // The literal system fixes m^T p = 0 already.
        EXPECT_LT((sol.p - ref.x.segment(nu, np)).norm(), 1e-8 * ref.x.segment(nu, np).norm());
        if (nl > 0) EXPECT_LT((sol.l - ref.x.segment(nu + np, nl)).norm(), 1e-8 * ref.x.segment(nu + np, nl).norm());
    }
}

TEST(SaddleSystem, ConstraintResidualsAtSolverTolerance) {
    const assembly::Discretization d(config(SurfaceKind::Varying, Method::Lagrange, 2, 2, 2), 1);
    const auto s = assembly::build_system(d);
    const auto sol = assembly::solve(s);
    const auto r = assembly::constraint_residuals(s, sol);
    const double scale = s.rhs().lpNorm<Eigen::Infinity>();
    EXPECT_LE(r.div_residual, 1e-9 * scale);
    EXPECT_LE(r.tangency_residual, 1e-9 * scale);
    EXPECT_NEAR(s.m.dot(sol.p), 0.0, 1e-12 * sol.p.norm() * s.area);
}

TEST(SaddleSystem, RepeatedSolvesAreBitwiseIdentical) {
    const assembly::Discretization d(config(SurfaceKind::Biconcave, Method::Lagrange, 2, 1, 3), 1);
    const auto s = assembly::build_system(d);
    const auto a = assembly::solve(s);
    const auto b = assembly::solve(s);
    EXPECT_EQ(a.u, b.u);
    EXPECT_EQ(a.p, b.p);
    EXPECT_EQ(a.l, b.l);
}

TEST(SaddleSystem, InvalidDegreesAreConfigErrors) {
    const auto expect_config = [](const assembly::SystemConfig& c) {
        try {
            assembly::validate(c);
            FAIL() << "accepted ku=" << c.ku << " kpr=" << c.kpr << " klambda=" << c.klambda;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::Config);
        }
    };
    auto c = config(SurfaceKind::Sphere, Method::Lagrange, 2, 3, 2);
    expect_config(c);
    c = config(SurfaceKind::Sphere, Method::Lagrange, 2, 1, 2);
    c.kpr = 2;
    expect_config(c);
    c = config(SurfaceKind::Sphere, Method::Lagrange, 1, 1, 1);
    c.kpr = 1;
    expect_config(c);
    c = config(SurfaceKind::Sphere, Method::Penalty, 2, 1, 3);
    c.kp = 2;
    expect_config(c);
    c.allow_unstable = true;
    c = config(SurfaceKind::Sphere, Method::Lagrange, 2, 1, 2);
    c.mu = -1.0;
    expect_config(c);
}

// ---------------------------------------------------------------------------
// Dual norm on a multiplier space

TEST(Riesz, MultiplierSpaceIdentitiesAndRandomDirections) {
    const assembly::Discretization d(config(SurfaceKind::Sphere, Method::Lagrange, 2, 1, 2), 1);
    const auto h1 = assembly::assemble_h1(d.multiplier(), d.geometry());
    std::mt19937 rng(31);
    std::normal_distribution<double> g;
    const int n = h1.rows();
    const Eigen::VectorXd e = Eigen::VectorXd::NullaryExpr(n, [&] { return g(rng); });
    const auto image = linalg::hminus1_riesz(h1, h1.multiply(e));
    EXPECT_NEAR(image.norm, std::sqrt(e.dot(h1.multiply(e))), 1e-10 * image.norm);

    const Eigen::VectorXd f = Eigen::VectorXd::NullaryExpr(n, [&] { return g(rng); });
    const auto r = linalg::hminus1_riesz(h1, f);
    double sup = 0.0;
    for (int k = 0; k < 500; ++k) {
        const Eigen::VectorXd xi = Eigen::VectorXd::NullaryExpr(n, [&] { return g(rng); });
        sup = std::max(sup, std::abs(f.dot(xi)) / std::sqrt(xi.dot(h1.multiply(xi))));
    }
    EXPECT_LE(sup, r.norm + 1e-10);
}
