#include "surfstokes/assembly/system.hpp"

#include <cmath>
#include <string>

#include "surfstokes/errors.hpp"
#include "surfstokes/parallel.hpp"

namespace surfstokes::assembly {

Method parse_method(std::string_view name) {
    if (name == "lagrange") return Method::Lagrange;
    if (name == "penalty") return Method::Penalty;
    throw Error(ErrorCode::Config, "unknown method '" + std::string(name) + "'");
}

std::string_view method_name(Method m) {
    return m == Method::Lagrange ? "lagrange" : "penalty";
}

void validate(const SystemConfig& c) {
    const auto degree_ok = [](int k) { return k >= 1 && k <= 5; };
    if (!c.allow_unstable) {
        SURFSTOKES_THROW_IF(c.ku < 2, ErrorCode::Config, "Taylor-Hood pair needs ku >= 2");
        SURFSTOKES_THROW_IF(c.kpr != c.ku - 1, ErrorCode::Config, "Taylor-Hood pair needs kpr = ku - 1");
    }
    SURFSTOKES_THROW_IF(!degree_ok(c.ku) || !degree_ok(c.kpr), ErrorCode::Config,
                        "velocity and pressure degrees must lie in 1..5");
    SURFSTOKES_THROW_IF(!degree_ok(c.kg), ErrorCode::Config, "geometry degree must lie in 1..5");
    if (c.method == Method::Lagrange) {
        SURFSTOKES_THROW_IF(c.klambda < 1 || c.klambda > c.ku, ErrorCode::Config,
                            "multiplier degree must satisfy 1 <= klambda <= ku");
    } else {
        SURFSTOKES_THROW_IF(!degree_ok(c.kp), ErrorCode::Config, "normal degree must lie in 1..5");
        SURFSTOKES_THROW_IF(c.kp < c.kg, ErrorCode::Config, "penalty needs kp >= kg");
        SURFSTOKES_THROW_IF(!std::isfinite(c.eta_exponent), ErrorCode::Config,
                            "eta exponent must be finite");
    }
    SURFSTOKES_THROW_IF(!(c.mu >= 0.0) || !std::isfinite(c.mu), ErrorCode::Config,
                        "viscosity mu must be finite and nonnegative");
    SURFSTOKES_THROW_IF(c.quad < -1 || c.quad > 20, ErrorCode::Config,
                        "quadrature exactness must lie in 0..20");
    SURFSTOKES_THROW_IF(c.threads < 1, ErrorCode::Config, "threads must be positive");
}

Discretization::Discretization(const SystemConfig& config, int level)
    : config_(config),
      level_(level),
      exact_(geometry::LevelSetSurface(config.surface), config.multiplier, config.mu) {
    validate(config_);
    SURFSTOKES_THROW_IF(level < 0 || level > mesh::kMaxLevel, ErrorCode::Config,
                        "level must lie in 0.." + std::to_string(mesh::kMaxLevel));
    const geometry::LevelSetSurface surface(config_.surface);
    mesh_ = std::make_unique<mesh::CurvedMesh>(mesh::base_mesh_for(surface, level), surface, config_.kg);
    u_ = std::make_unique<fem::FunctionSpace>(*mesh_, config_.ku, 3);
    p_ = std::make_unique<fem::FunctionSpace>(*mesh_, config_.kpr, 1);
    if (config_.method == Method::Lagrange)
        l_ = std::make_unique<fem::FunctionSpace>(*mesh_, config_.klambda, 1);
    geo_ = std::make_unique<fem::GeometryCache>(
        *mesh_, fem::make_quadrature(config_.quadrature_exactness()), config_.threads);
}

const std::vector<LiftedPoint>& Discretization::lifted() const {
    if (!lifted_.empty()) return lifted_;
    const int nq = geo_->points_per_element();
    std::vector<LiftedPoint> out(static_cast<std::size_t>(geo_->num_elements()) * nq);
    const geometry::LevelSetSurface& surf = mesh_->surface();
    parallel_for(geo_->num_elements(), config_.threads, [&](int begin, int end) {
        for (int e = begin; e < end; ++e) {
            for (int q = 0; q < nq; ++q) {
                LiftedPoint& lp = out[static_cast<std::size_t>(e) * nq + q];
                lp.lift = mesh::lift_point(surf, geo_->at(e, q).x);
                lp.exact = exact_.evaluate(lp.lift.point);
                lp.f = exact_.rhs(lp.lift.point);
            }
        }
    });
    lifted_ = std::move(out);
    return lifted_;
}

double Discretization::eta() const {
    return std::pow(mesh_->h(), -config_.eta_exponent);
}

linalg::SparseMatrix SaddleSystem::matrix(double alpha_diagonal) const {
    const int nu = n_u(), np = n_p(), nl = n_l();
    const int a = nu + np + nl;
    std::vector<linalg::BlockEntry> blocks{
        {&A, 0, 0, false},
        {&B_p, nu, 0, false},
        {&B_p, 0, nu, true},
    };
    if (nl > 0) {
        blocks.push_back({&B_l, nu + np, 0, false});
        blocks.push_back({&B_l, 0, nu + np, true});
    }
    std::vector<linalg::Triplet> extra;
    extra.reserve(2 * np + 1);
    for (int i = 0; i < np; ++i) {
        extra.push_back({nu + i, a, m[i]});
        extra.push_back({a, nu + i, m[i]});
    }
    if (alpha_diagonal != 0.0) extra.push_back({a, a, alpha_diagonal});
    return linalg::assemble_blocks(size(), size(), blocks, extra);
}

Eigen::VectorXd SaddleSystem::rhs() const {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(size());
    b.head(n_u()) = rhs_u;
    b.segment(n_u(), n_p()) = rhs_p;
    return b;
}

std::vector<signed char> saddle_signs(const SaddleSystem& s) {
    std::vector<signed char> signs(s.size(), -1);
    std::fill(signs.begin(), signs.begin() + s.n_u(), 1);
    if (!signs.empty()) signs.back() = 1;
    return signs;
}

SaddleSystem build_system(const Discretization& disc, const AssemblyOptions& opt) {
    const SystemConfig& c = disc.config();
    const fem::FunctionSpace& u = disc.velocity();
    const fem::FunctionSpace& p = disc.pressure();
    const fem::GeometryCache& geo = disc.geometry();

    SaddleSystem s;
    s.method = c.method;
    s.A = assemble_a(u, geo, c.mu, opt);
    if (c.method == Method::Penalty) {
        const fem::FunctionSpace normal_space(disc.mesh(), c.kp, 3);
        const linalg::SparseMatrix pen = assemble_penalty(u, normal_space, geo, disc.eta(), opt);
        const std::vector<linalg::BlockEntry> blocks{{&s.A, 0, 0, false}, {&pen, 0, 0, false}};
        s.A = linalg::assemble_blocks(u.num_dofs(), u.num_dofs(), blocks, {});
        s.B_l = linalg::SparseMatrix(0, u.num_dofs());
    } else {
        s.B_l = assemble_b_multiplier(u, disc.multiplier(), geo, opt);
    }
    s.B_p = assemble_b_pressure(u, p, geo, opt);
    s.m = assemble_mean(p, geo);
    s.area = s.m.sum();

    const std::vector<LiftedPoint>& lifted = disc.lifted();
    std::vector<Eigen::Vector3d> f(lifted.size());
    std::vector<double> g(lifted.size());
    for (std::size_t i = 0; i < lifted.size(); ++i) {
        f[i] = lifted[i].f;
        g[i] = -lifted[i].exact.div_u;
    }
    s.rhs_u = assemble_vector_load(u, geo, f);
    // (u_h, grad q) = -(div u, q) for the tangential exact field.
    s.rhs_p = assemble_scalar_load(p, geo, g);
    return s;
}

Solution solve(const SaddleSystem& system, const linalg::FactorOptions& options) {
    SURFSTOKES_THROW_IF(!(system.area > 0.0), ErrorCode::Internal, "system has no pressure mean");
    const linalg::SparseMatrix k = system.matrix(system.area);
    linalg::FactorOptions opt = options;
    if (opt.signs.empty()) opt.signs = saddle_signs(system);
    const linalg::LdltFactor factor(k, opt);

    Solution sol;
    sol.inertia = factor.inertia();
    const Eigen::VectorXd x = factor.solve(system.rhs(), &sol.report);
    const int nu = system.n_u(), np = system.n_p(), nl = system.n_l();
    sol.u = x.head(nu);
    sol.p = x.segment(nu, np);
    sol.l = x.segment(nu + np, nl);
    sol.alpha = x[nu + np + nl];
    sol.p.array() -= system.m.dot(sol.p) / system.area;
    return sol;
}

ConstraintResiduals constraint_residuals(const SaddleSystem& system, const Solution& sol) {
    ConstraintResiduals r;
    Eigen::VectorXd bp = system.B_p.multiply(sol.u) + sol.alpha * system.m - system.rhs_p;
    r.div_residual = bp.size() ? bp.cwiseAbs().maxCoeff() : 0.0;
    if (system.n_l() > 0) r.tangency_residual = system.B_l.multiply(sol.u).cwiseAbs().maxCoeff();
    return r;
}

}  // namespace surfstokes::assembly
