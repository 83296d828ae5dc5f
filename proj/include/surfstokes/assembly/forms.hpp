#pragma once

#include <vector>

#include <Eigen/Core>

#include "surfstokes/fem/element_cache.hpp"
#include "surfstokes/fem/function_space.hpp"
#include "surfstokes/linalg/sparse.hpp"

namespace surfstokes::assembly {

/// Element loops compute local matrices in `traversal` order (all elements
/// in index order when empty) on `threads` workers; the global sums are
/// always accumulated in element-index order, so the result is independent
/// of both.
struct AssemblyOptions {
    int threads = 1;
    std::vector<int> traversal;
};

/// 2 mu (E_h(w), E_h(v)) + (w, v) on a 3-vector space.
linalg::SparseMatrix assemble_a(const fem::FunctionSpace& u, const fem::GeometryCache& geo, double mu,
                                const AssemblyOptions& opt = {});

/// Rows: pressure basis chi_q; columns: velocity dofs. Entry (w_j, grad chi_q).
linalg::SparseMatrix assemble_b_pressure(const fem::FunctionSpace& u, const fem::FunctionSpace& p,
                                         const fem::GeometryCache& geo, const AssemblyOptions& opt = {});

/// Rows: multiplier basis psi; columns: velocity dofs. Entry (w_j . n_h, psi).
linalg::SparseMatrix assemble_b_multiplier(const fem::FunctionSpace& u, const fem::FunctionSpace& l,
                                           const fem::GeometryCache& geo, const AssemblyOptions& opt = {});

/// eta ((w . n~)(v . n~)) with n~ the normalized interpolant of the exact
/// normal in the degree-kp vector space `normal_space`.
linalg::SparseMatrix assemble_penalty(const fem::FunctionSpace& u, const fem::FunctionSpace& normal_space,
                                      const fem::GeometryCache& geo, double eta,
                                      const AssemblyOptions& opt = {});

/// Improved normal n~_h at every quadrature point, normalized.
std::vector<Eigen::Vector3d> improved_normal(const fem::FunctionSpace& normal_space,
                                            const fem::GeometryCache& geo);

/// Scalar Gram matrices.
linalg::SparseMatrix assemble_mass(const fem::FunctionSpace& s, const fem::GeometryCache& geo,
                                   const AssemblyOptions& opt = {});
linalg::SparseMatrix assemble_h1(const fem::FunctionSpace& s, const fem::GeometryCache& geo,
                                 const AssemblyOptions& opt = {});

/// m_i = integral of chi_i over the discrete surface.
Eigen::VectorXd assemble_mean(const fem::FunctionSpace& s, const fem::GeometryCache& geo);

/// Load vectors from samples at quadrature points (index elem * nq + q).
Eigen::VectorXd assemble_vector_load(const fem::FunctionSpace& u, const fem::GeometryCache& geo,
                                     const std::vector<Eigen::Vector3d>& samples);
Eigen::VectorXd assemble_scalar_load(const fem::FunctionSpace& s, const fem::GeometryCache& geo,
                                     const std::vector<double>& samples);

/// rhs_i = integral of f(pi(x)) . phi_i over the discrete surface.
Eigen::VectorXd assemble_rhs(const fem::FunctionSpace& u, const fem::GeometryCache& geo,
                             const fem::VectorField& f, int threads = 1);

}  // namespace surfstokes::assembly
