#include "surfstokes/assembly/forms.hpp"

#include <algorithm>
#include <numeric>

#include "surfstokes/errors.hpp"
#include "surfstokes/parallel.hpp"

namespace surfstokes::assembly {

namespace {

std::vector<int> traversal_order(int n, const AssemblyOptions& opt) {
    if (opt.traversal.empty()) {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        return order;
    }
    SURFSTOKES_THROW_IF(static_cast<int>(opt.traversal.size()) != n, ErrorCode::Internal,
                        "traversal must list every element once");
    return opt.traversal;
}

// Local(elem, matrix) fills the rows.local_dofs() x cols.local_dofs() element matrix.
template <class Local>
linalg::SparseMatrix assemble_bilinear(const fem::FunctionSpace& rows, const fem::FunctionSpace& cols,
                                       const AssemblyOptions& opt, Local&& local) {
    const int ne = rows.mesh().num_elements();
    std::vector<std::vector<int>> pattern(rows.num_dofs());
    std::vector<int> rd, cd;
    for (int t = 0; t < ne; ++t) {
        rows.element_dofs(t, rd);
        cols.element_dofs(t, cd);
        for (int r : rd) pattern[r].insert(pattern[r].end(), cd.begin(), cd.end());
    }
    for (auto& r : pattern) {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
    }
    linalg::SparseMatrix a = linalg::SparseMatrix::from_pattern(rows.num_dofs(), cols.num_dofs(), std::move(pattern));

    const std::vector<int> order = traversal_order(ne, opt);
    std::vector<Eigen::MatrixXd> locals(ne);
    parallel_for(ne, opt.threads, [&](int begin, int end) {
        for (int k = begin; k < end; ++k) {
            const int t = order[k];
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows.local_dofs(), cols.local_dofs());
            local(t, m);
            locals[t] = std::move(m);
        }
    });
    for (int t = 0; t < ne; ++t) {
        rows.element_dofs(t, rd);
        cols.element_dofs(t, cd);
        const Eigen::MatrixXd& m = locals[t];
        for (std::size_t i = 0; i < rd.size(); ++i)
            for (std::size_t j = 0; j < cd.size(); ++j) a.add(rd[i], cd[j], m(i, j));
        Eigen::MatrixXd().swap(locals[t]);
    }
    a.prune();
    return a;
}

void mirror_upper(Eigen::MatrixXd& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < i; ++j) m(i, j) = m(j, i);
}

}  // namespace

linalg::SparseMatrix assemble_a(const fem::FunctionSpace& u, const fem::GeometryCache& geo, double mu,
                                const AssemblyOptions& opt) {
    SURFSTOKES_THROW_IF(u.components() != 3, ErrorCode::Config, "velocity space must be vector valued");
    const fem::BasisTable table(u.element(), geo.rule());
    const int n = table.num_basis();
    return assemble_bilinear(u, u, opt, [&](int t, Eigen::MatrixXd& m) {
        fem::BasisAtPoint b;
        for (int q = 0; q < geo.points_per_element(); ++q) {
            const mesh::ElementPoint& g = geo.at(t, q);
            table.eval(q, g, b);
            const double w = geo.dx(t, q);
            const Eigen::MatrixXd gg = b.grads * b.grads.transpose();
            for (int i = 0; i < n; ++i)
                for (int c = 0; c < 3; ++c) {
                    const int a = 3 * i + c;
                    for (int j = i; j < n; ++j)
                        for (int d = (j == i ? c : 0); d < 3; ++d) {
                            // 2 mu E(phi_i e_c) : E(phi_j e_d) = mu (P_cd g_i.g_j + g_jc g_id)
                            double v = mu * (g.projector(c, d) * gg(i, j) + b.grads(j, c) * b.grads(i, d));
                            if (c == d) v += b.values[i] * b.values[j];
                            m(a, 3 * j + d) += w * v;
                        }
                }
        }
        mirror_upper(m);
    });
}

linalg::SparseMatrix assemble_b_pressure(const fem::FunctionSpace& u, const fem::FunctionSpace& p,
                                         const fem::GeometryCache& geo, const AssemblyOptions& opt) {
    const fem::BasisTable tu(u.element(), geo.rule());
    const fem::BasisTable tp(p.element(), geo.rule());
    return assemble_bilinear(p, u, opt, [&](int t, Eigen::MatrixXd& m) {
        fem::BasisAtPoint bu, bp;
        for (int q = 0; q < geo.points_per_element(); ++q) {
            const mesh::ElementPoint& g = geo.at(t, q);
            tu.eval(q, g, bu);
            tp.eval(q, g, bp);
            const double w = geo.dx(t, q);
            for (int r = 0; r < tp.num_basis(); ++r)
                for (int i = 0; i < tu.num_basis(); ++i)
                    for (int c = 0; c < 3; ++c) m(r, 3 * i + c) += w * bu.values[i] * bp.grads(r, c);
        }
    });
}

linalg::SparseMatrix assemble_b_multiplier(const fem::FunctionSpace& u, const fem::FunctionSpace& l,
                                           const fem::GeometryCache& geo, const AssemblyOptions& opt) {
    const fem::BasisTable tu(u.element(), geo.rule());
    const fem::BasisTable tl(l.element(), geo.rule());
    return assemble_bilinear(l, u, opt, [&](int t, Eigen::MatrixXd& m) {
        for (int q = 0; q < geo.points_per_element(); ++q) {
            const mesh::ElementPoint& g = geo.at(t, q);
            const Eigen::VectorXd& vu = tu.values(q);
            const Eigen::VectorXd& vl = tl.values(q);
            const double w = geo.dx(t, q);
            for (int r = 0; r < tl.num_basis(); ++r)
                for (int i = 0; i < tu.num_basis(); ++i)
                    for (int c = 0; c < 3; ++c) m(r, 3 * i + c) += w * vu[i] * g.normal[c] * vl[r];
        }
    });
}

std::vector<Eigen::Vector3d> improved_normal(const fem::FunctionSpace& normal_space, const fem::GeometryCache& geo) {
    SURFSTOKES_THROW_IF(normal_space.components() != 3, ErrorCode::Config, "normal space must be vector valued");
    const auto& surface = normal_space.mesh().surface();
    const Eigen::VectorXd coeffs = fem::interpolate(
        normal_space, fem::VectorField([&](const Eigen::Vector3d& p) { return surface.frame_at(p).normal; }));
    const fem::BasisTable tn(normal_space.element(), geo.rule());
    const int nq = geo.points_per_element();
    std::vector<Eigen::Vector3d> out(static_cast<std::size_t>(geo.num_elements()) * nq);
    for (int t = 0; t < geo.num_elements(); ++t) {
        const Eigen::VectorXd loc = fem::gather(normal_space, t, coeffs);
        for (int q = 0; q < nq; ++q) {
            Eigen::Vector3d n = Eigen::Vector3d::Zero();
            for (int i = 0; i < tn.num_basis(); ++i) n += tn.values(q)[i] * loc.segment<3>(3 * i);
            out[t * nq + q] = n.normalized();
        }
    }
    return out;
}

linalg::SparseMatrix assemble_penalty(const fem::FunctionSpace& u, const fem::FunctionSpace& normal_space,
                                      const fem::GeometryCache& geo, double eta, const AssemblyOptions& opt) {
    const std::vector<Eigen::Vector3d> nt = improved_normal(normal_space, geo);
    const fem::BasisTable tu(u.element(), geo.rule());
    const int n = tu.num_basis();
    const int nq = geo.points_per_element();
    return assemble_bilinear(u, u, opt, [&](int t, Eigen::MatrixXd& m) {
        for (int q = 0; q < nq; ++q) {
            const Eigen::Vector3d& nn = nt[t * nq + q];
            const Eigen::VectorXd& v = tu.values(q);
            const double w = eta * geo.dx(t, q);
            for (int i = 0; i < n; ++i)
                for (int c = 0; c < 3; ++c)
                    for (int j = i; j < n; ++j)
                        for (int d = (j == i ? c : 0); d < 3; ++d)
                            m(3 * i + c, 3 * j + d) += w * v[i] * v[j] * nn[c] * nn[d];
        }
        mirror_upper(m);
    });
}

linalg::SparseMatrix assemble_mass(const fem::FunctionSpace& s, const fem::GeometryCache& geo,
                                   const AssemblyOptions& opt) {
    SURFSTOKES_THROW_IF(s.components() != 1, ErrorCode::Config, "scalar space expected");
    const fem::BasisTable tb(s.element(), geo.rule());
    return assemble_bilinear(s, s, opt, [&](int t, Eigen::MatrixXd& m) {
        for (int q = 0; q < geo.points_per_element(); ++q) {
            const Eigen::VectorXd& v = tb.values(q);
            m.noalias() += geo.dx(t, q) * v * v.transpose();
        }
        mirror_upper(m);
    });
}

linalg::SparseMatrix assemble_h1(const fem::FunctionSpace& s, const fem::GeometryCache& geo,
                                 const AssemblyOptions& opt) {
    SURFSTOKES_THROW_IF(s.components() != 1, ErrorCode::Config, "scalar space expected");
    const fem::BasisTable tb(s.element(), geo.rule());
    return assemble_bilinear(s, s, opt, [&](int t, Eigen::MatrixXd& m) {
        fem::BasisAtPoint b;
        for (int q = 0; q < geo.points_per_element(); ++q) {
            tb.eval(q, geo.at(t, q), b);
            m.noalias() += geo.dx(t, q) * (b.values * b.values.transpose() + b.grads * b.grads.transpose());
        }
        mirror_upper(m);
    });
}

Eigen::VectorXd assemble_mean(const fem::FunctionSpace& s, const fem::GeometryCache& geo) {
    std::vector<double> ones(static_cast<std::size_t>(geo.num_elements()) * geo.points_per_element(), 1.0);
    return assemble_scalar_load(s, geo, ones);
}

Eigen::VectorXd assemble_vector_load(const fem::FunctionSpace& u, const fem::GeometryCache& geo,
                                     const std::vector<Eigen::Vector3d>& samples) {
    SURFSTOKES_THROW_IF(u.components() != 3, ErrorCode::Config, "vector space expected");
    const fem::BasisTable tb(u.element(), geo.rule());
    const int nq = geo.points_per_element();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(u.num_dofs());
    std::vector<int> dofs;
    for (int t = 0; t < geo.num_elements(); ++t) {
        u.element_dofs(t, dofs);
        for (int q = 0; q < nq; ++q) {
            const Eigen::Vector3d f = geo.dx(t, q) * samples[t * nq + q];
            const Eigen::VectorXd& v = tb.values(q);
            for (int i = 0; i < tb.num_basis(); ++i)
                for (int c = 0; c < 3; ++c) out[dofs[3 * i + c]] += v[i] * f[c];
        }
    }
    return out;
}

Eigen::VectorXd assemble_scalar_load(const fem::FunctionSpace& s, const fem::GeometryCache& geo,
                                     const std::vector<double>& samples) {
    SURFSTOKES_THROW_IF(s.components() != 1, ErrorCode::Config, "scalar space expected");
    const fem::BasisTable tb(s.element(), geo.rule());
    const int nq = geo.points_per_element();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(s.num_dofs());
    std::vector<int> dofs;
    for (int t = 0; t < geo.num_elements(); ++t) {
        s.element_dofs(t, dofs);
        for (int q = 0; q < nq; ++q) {
            const double f = geo.dx(t, q) * samples[t * nq + q];
            const Eigen::VectorXd& v = tb.values(q);
            for (int i = 0; i < tb.num_basis(); ++i) out[dofs[i]] += v[i] * f;
        }
    }
    return out;
}

Eigen::VectorXd assemble_rhs(const fem::FunctionSpace& u, const fem::GeometryCache& geo, const fem::VectorField& f,
                             int threads) {
    const int nq = geo.points_per_element();
    const auto& surface = u.mesh().surface();
    std::vector<Eigen::Vector3d> samples(static_cast<std::size_t>(geo.num_elements()) * nq);
    parallel_for(geo.num_elements(), threads, [&](int begin, int end) {
        for (int t = begin; t < end; ++t)
            for (int q = 0; q < nq; ++q) samples[t * nq + q] = f(surface.closest_point(geo.at(t, q).x));
    });
    return assemble_vector_load(u, geo, samples);
}

}  // namespace surfstokes::assembly
