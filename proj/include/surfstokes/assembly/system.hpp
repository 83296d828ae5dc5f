#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "surfstokes/assembly/forms.hpp"
#include "surfstokes/fem/element_cache.hpp"
#include "surfstokes/fem/function_space.hpp"
#include "surfstokes/geometry/exact_fields.hpp"
#include "surfstokes/linalg/ldlt.hpp"
#include "surfstokes/linalg/sparse.hpp"
#include "surfstokes/mesh/curved_mesh.hpp"
#include "surfstokes/mesh/lift.hpp"

namespace surfstokes::assembly {

enum class Method { Lagrange, Penalty };

Method parse_method(std::string_view name);
std::string_view method_name(Method m);

struct SystemConfig {
    geometry::SurfaceKind surface = geometry::SurfaceKind::Sphere;
    Method method = Method::Lagrange;
    int ku = 2;
    int kpr = 1;
    int klambda = 1;
    int kg = 2;
    int kp = 3;               // improved-normal degree (penalty)
    double mu = 1.0;
    double eta_exponent = 2.0;  // eta = h^-eta_exponent (penalty)
    int quad = -1;            // quadrature exactness, -1: 2 ku + 2
    geometry::MultiplierChoice multiplier = geometry::MultiplierChoice::Linear;
    int threads = 1;
    /// Skips the Taylor-Hood degree checks (for stability experiments).
    bool allow_unstable = false;

    int quadrature_exactness() const { return quad >= 0 ? quad : 2 * ku + 2; }
};

/// Throws Config on invalid degree combinations.
void validate(const SystemConfig& config);

/// Exact data at one quadrature point, transported to the surface.
struct LiftedPoint {
    mesh::Lift lift;
    geometry::ExactPoint exact;
    Eigen::Vector3d f;
};

/// Mesh, spaces and quadrature data of one refinement level. Not copyable:
/// the spaces refer to the mesh.
class Discretization {
public:
    Discretization(const SystemConfig& config, int level);
    Discretization(const Discretization&) = delete;
    Discretization& operator=(const Discretization&) = delete;

    const SystemConfig& config() const { return config_; }
    int level() const { return level_; }
    const geometry::LevelSetSurface& surface() const { return mesh_->surface(); }
    const geometry::ExactSolution& exact() const { return exact_; }
    const mesh::CurvedMesh& mesh() const { return *mesh_; }
    const fem::FunctionSpace& velocity() const { return *u_; }
    const fem::FunctionSpace& pressure() const { return *p_; }
    /// Multiplier space (Lagrange method only).
    const fem::FunctionSpace& multiplier() const { return *l_; }
    bool has_multiplier() const { return l_ != nullptr; }
    const fem::GeometryCache& geometry() const { return *geo_; }

    /// Lifted exact data at every quadrature point, computed on first use.
    const std::vector<LiftedPoint>& lifted() const;
    /// Penalty parameter h^-eta_exponent.
    double eta() const;

private:
    SystemConfig config_;
    int level_;
    geometry::ExactSolution exact_;
    std::unique_ptr<mesh::CurvedMesh> mesh_;
    std::unique_ptr<fem::FunctionSpace> u_, p_, l_;
    std::unique_ptr<fem::GeometryCache> geo_;
    mutable std::vector<LiftedPoint> lifted_;
};

/// Blocks of the discrete saddle-point problem. Unknown order: velocity,
/// pressure, multiplier (Lagrange only), then the scalar alpha enforcing the
/// zero pressure mean:
///
///   [ A    Bp^T  Bl^T  0 ] [u]   [rhs_u]
///   [ Bp   0     0     m ] [p] = [rhs_p]
///   [ Bl   0     0     0 ] [l]   [0    ]
///   [ 0    m^T   0     0 ] [a]   [0    ]
///
/// For the penalty method A includes the penalty term and Bl is empty.
struct SaddleSystem {
    Method method = Method::Lagrange;
    linalg::SparseMatrix A;
    linalg::SparseMatrix B_p;
    linalg::SparseMatrix B_l;
    Eigen::VectorXd m;
    Eigen::VectorXd rhs_u;
    Eigen::VectorXd rhs_p;
    double area = 0.0;  // |Gamma_h| = sum of m

    int n_u() const { return A.rows(); }
    int n_p() const { return B_p.rows(); }
    int n_l() const { return B_l.rows(); }
    int size() const { return n_u() + n_p() + n_l() + 1; }

    /// Full symmetric matrix with the given alpha-alpha entry (zero gives
    /// the system above).
    linalg::SparseMatrix matrix(double alpha_diagonal = 0.0) const;
    Eigen::VectorXd rhs() const;
};

SaddleSystem build_system(const Discretization& disc, const AssemblyOptions& opt = {});

struct Solution {
    Eigen::VectorXd u;
    Eigen::VectorXd p;
    Eigen::VectorXd l;
    double alpha = 0.0;
    linalg::Inertia inertia;  // of the system matrix
    linalg::SolveReport report;
};

/// Solves the saddle system.
///
/// The factorized matrix carries |Gamma_h| in the alpha-alpha slot. With
/// T the congruence p -> p + (alpha/2) 1, T^T K T equals that matrix, so the
/// reported inertia is the inertia of the original system. Since constant
/// pressures are in the kernel of Bp^T, the pressure part of the solution
/// differs from the solution of the original system only by a constant,
/// removed afterwards by subtracting the discrete mean.
Solution solve(const SaddleSystem& system, const linalg::FactorOptions& options = {});

/// Sign hints for the stabilized matrix: +1 for velocity and alpha, -1 for
/// pressure and multiplier.
std::vector<signed char> saddle_signs(const SaddleSystem& system);

struct ConstraintResiduals {
    double div_residual = 0.0;       // max |Bp u + alpha m - rhs_p|
    double tangency_residual = 0.0;  // max |Bl u|
};

ConstraintResiduals constraint_residuals(const SaddleSystem& system, const Solution& sol);

}  // namespace surfstokes::assembly
