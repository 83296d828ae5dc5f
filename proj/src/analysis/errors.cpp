#include "surfstokes/analysis/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <limits>
#include <memory>
#include <ostream>

#include "surfstokes/assembly/forms.hpp"
#include "surfstokes/errors.hpp"
#include "surfstokes/fem/element_cache.hpp"
#include "surfstokes/linalg/diagnostics.hpp"
#include "surfstokes/mesh/lift.hpp"
#include "surfstokes/parallel.hpp"

namespace surfstokes::analysis {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void probe_point(const mesh::Lift& lift, const mesh::ElementPoint& geo, GeometricProbes& out) {
    out.max_distance = std::max(out.max_distance, std::abs(lift.distance));
    out.max_normal_error = std::max(out.max_normal_error, (lift.frame.normal - geo.normal).norm());
    out.max_area_error = std::max(out.max_area_error, std::abs(1.0 - mesh::area_ratio(lift, geo)));
}

void merge(GeometricProbes& into, const GeometricProbes& p) {
    into.max_distance = std::max(into.max_distance, p.max_distance);
    into.max_normal_error = std::max(into.max_normal_error, p.max_normal_error);
    into.max_area_error = std::max(into.max_area_error, p.max_area_error);
}

// Per-element integrals, reduced in element order.
enum Slot {
    kU, kUt, kUn, kStrain, kCov, kDir, kDiv, kP, kPmean, kL, kTangency, kSlots
};

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16g", v);
    return buf;
}

// Columns listed in `integers` are printed without a fractional part.
void write_row(std::ostream& os, const std::vector<double>& values, std::initializer_list<std::size_t> integers) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) os << ',';
        if (std::find(integers.begin(), integers.end(), i) != integers.end() && std::isfinite(values[i]))
            os << static_cast<long long>(values[i]);
        else
            os << format_value(values[i]);
    }
    os << '\n';
}

std::vector<double> safe_eoc(const std::vector<double>& e, const std::vector<double>& h) {
    std::vector<double> out;
    for (std::size_t i = 1; i < e.size(); ++i) {
        const bool ok = e[i - 1] > 0.0 && e[i] > 0.0 && std::isfinite(e[i - 1]) && std::isfinite(e[i]);
        out.push_back(ok ? eoc({e[i - 1], e[i]}, {h[i - 1], h[i]})[0] : kNaN);
    }
    return out;
}

double safe_slope(const std::vector<double>& e, const std::vector<double>& h) {
    for (double v : e) {
        if (!(v > 0.0) || !std::isfinite(v)) return kNaN;
    }
    return loglog_slope(e, h);
}

// Writes eoc rows for columns [first, ...) of a table; column 0 is the level.
void write_eoc_block(std::ostream& os, const std::vector<std::string>& names, std::size_t first,
                     const std::vector<std::vector<double>>& rows, std::size_t h_column) {
    os << "level";
    for (std::size_t c = first; c < names.size(); ++c) os << ",eoc_" << names[c];
    os << '\n';
    std::vector<double> hs;
    for (const auto& r : rows) hs.push_back(r[h_column]);
    std::vector<std::vector<double>> eocs;
    for (std::size_t c = first; c < names.size(); ++c) {
        std::vector<double> e;
        for (const auto& r : rows) e.push_back(r[c]);
        eocs.push_back(safe_eoc(e, hs));
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::vector<double> row{rows[i][0]};
        for (const auto& col : eocs) row.push_back(col[i - 1]);
        write_row(os, row, {0});
    }
}

}  // namespace

GeometricProbes geometric_probes(const mesh::CurvedMesh& mesh, const fem::QuadratureRule& rule, int threads) {
    const int ne = mesh.num_elements();
    std::vector<GeometricProbes> per(ne);
    parallel_for(ne, threads, [&](int begin, int end) {
        for (int e = begin; e < end; ++e) {
            for (const auto& x : rule.points) {
                const mesh::ElementPoint geo = mesh.element_geometry(e, x);
                probe_point(mesh::lift_point(mesh.surface(), geo.x), geo, per[e]);
            }
        }
    });
    GeometricProbes out;
    for (const auto& p : per) merge(out, p);
    return out;
}

ErrorReport error_norms(const assembly::Discretization& disc, const DiscreteSolution& sol) {
    const fem::FunctionSpace& us = disc.velocity();
    const fem::FunctionSpace& ps = disc.pressure();
    const fem::GeometryCache& geo = disc.geometry();
    const bool lagrange = disc.has_multiplier();
    SURFSTOKES_THROW_IF(sol.u.size() != us.num_dofs() || sol.p.size() != ps.num_dofs() ||
                            (lagrange && sol.l.size() != disc.multiplier().num_dofs()),
                        ErrorCode::Internal, "solution does not match the discretization");

    const std::vector<assembly::LiftedPoint>& lifted = disc.lifted();
    const int ne = geo.num_elements();
    const int nq = geo.points_per_element();
    const double mu = disc.config().mu;

    std::vector<Eigen::Vector3d> tilde_normal;
    if (!lagrange) {
        const fem::FunctionSpace normal_space(disc.mesh(), disc.config().kp, 3);
        tilde_normal = assembly::improved_normal(normal_space, geo);
    }

    const fem::BasisTable tu(us.element(), geo.rule());
    const fem::BasisTable tp(ps.element(), geo.rule());
    std::unique_ptr<fem::BasisTable> tl;
    if (lagrange) tl = std::make_unique<fem::BasisTable>(disc.multiplier().element(), geo.rule());

    std::vector<std::array<double, kSlots>> sums(ne);
    std::vector<GeometricProbes> probes(ne);
    std::vector<double> lambda_error(lagrange ? static_cast<std::size_t>(ne) * nq : 0);

    parallel_for(ne, disc.config().threads, [&](int begin, int end) {
        fem::BasisAtPoint bu, bp, bl;
        for (int e = begin; e < end; ++e) {
            auto& s = sums[e];
            s.fill(0.0);
            const Eigen::VectorXd lu = fem::gather(us, e, sol.u);
            const Eigen::VectorXd lp = fem::gather(ps, e, sol.p);
            Eigen::VectorXd ll;
            if (lagrange) ll = fem::gather(disc.multiplier(), e, sol.l);
            for (int q = 0; q < nq; ++q) {
                const mesh::ElementPoint& g = geo.at(e, q);
                const assembly::LiftedPoint& lift = lifted[static_cast<std::size_t>(e) * nq + q];
                const geometry::ExactPoint& ex = lift.exact;
                const Eigen::Matrix3d& proj = lift.lift.frame.projector;
                const Eigen::Vector3d& n = lift.lift.frame.normal;
                const double dx = geo.dx(e, q);

                tu.eval(q, g, bu);
                tp.eval(q, g, bp);
                const fem::VectorGradients uh = fem::discrete_gradients_vector(bu, g, lu);
                const fem::ScalarGradients ph = fem::discrete_gradients_scalar(bp, lp);

                const Eigen::Vector3d eu = ex.u - uh.value;
                const Eigen::Matrix3d cov = proj * ex.grad_u;
                const Eigen::Matrix3d strain = 0.5 * (cov + cov.transpose());
                s[kU] += dx * eu.squaredNorm();
                s[kUt] += dx * (proj * eu).squaredNorm();
                s[kUn] += dx * std::pow(n.dot(eu), 2);
                s[kStrain] += dx * (strain - uh.strain).squaredNorm();
                s[kCov] += dx * (cov - uh.cov).squaredNorm();
                s[kDir] += dx * (ex.grad_u - uh.grad).squaredNorm();
                s[kDiv] += dx * std::pow(ex.div_u - uh.div, 2);
                const double ep = ex.p - ph.value;
                s[kP] += dx * ep * ep;
                s[kPmean] += dx * ep;
                if (lagrange) {
                    tl->eval(q, g, bl);
                    const double el = ex.lambda - fem::discrete_gradients_scalar(bl, ll).value;
                    lambda_error[static_cast<std::size_t>(e) * nq + q] = el;
                    s[kL] += dx * el * el;
                    s[kTangency] += dx * std::pow(uh.value.dot(g.normal), 2);
                } else {
                    s[kTangency] += dx * std::pow(uh.value.dot(tilde_normal[e * nq + q]), 2);
                }
                probe_point(lift.lift, g, probes[e]);
            }
        }
    });

    std::array<double, kSlots> total{};
    GeometricProbes gp;
    for (int e = 0; e < ne; ++e) {
        for (int k = 0; k < kSlots; ++k) total[k] += sums[e][k];
        merge(gp, probes[e]);
    }
    double area = 0.0;
    for (int e = 0; e < ne; ++e)
        for (int q = 0; q < nq; ++q) area += geo.dx(e, q);

    ErrorReport r;
    r.level = disc.level();
    r.h = disc.mesh().h();
    r.ndof_u = us.num_dofs();
    r.ndof_p = ps.num_dofs();
    r.ndof_l = lagrange ? disc.multiplier().num_dofs() : 0;
    r.u_l2 = std::sqrt(total[kU]);
    r.u_l2_tangential = std::sqrt(total[kUt]);
    r.u_l2_normal = std::sqrt(total[kUn]);
    r.u_energy = std::sqrt(2.0 * mu * total[kStrain] + total[kU]);
    r.u_cov = std::sqrt(total[kCov]);
    r.u_dir = std::sqrt(total[kDir]);
    r.u_div = std::sqrt(total[kDiv]);
    r.p_l2 = std::sqrt(std::max(total[kP] - total[kPmean] * total[kPmean] / area, 0.0));
    r.geo = gp;
    r.tangency = std::sqrt(total[kTangency]);
    if (lagrange) {
        r.l_l2 = std::sqrt(total[kL]);
        const fem::FunctionSpace& ls = disc.multiplier();
        const Eigen::VectorXd g = assembly::assemble_scalar_load(ls, geo, lambda_error);
        const assembly::AssemblyOptions opt{disc.config().threads, {}};
        r.l_hminus1 = linalg::hminus1_riesz(assembly::assemble_h1(ls, geo, opt), g).norm;
    } else {
        r.l_l2 = kNaN;
        r.l_hminus1 = kNaN;
    }
    return r;
}

double loglog_slope(const std::vector<double>& errors, const std::vector<double>& hs) {
    // The pairwise checks of eoc() cover every precondition.
    (void)eoc(errors, hs);
    const double n = static_cast<double>(errors.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        const double x = std::log(hs[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    SURFSTOKES_THROW_IF(!(den > 0.0), ErrorCode::Domain, "mesh sizes do not vary");
    return (n * sxy - sx * sy) / den;
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs) {
    SURFSTOKES_THROW_IF(errors.size() != hs.size(), ErrorCode::Domain, "eoc needs matching lengths");
    SURFSTOKES_THROW_IF(errors.size() < 2, ErrorCode::Domain, "eoc needs at least two levels");
    for (std::size_t i = 0; i < errors.size(); ++i) {
        SURFSTOKES_THROW_IF(!(errors[i] > 0.0) || !(hs[i] > 0.0), ErrorCode::Domain,
                            "eoc needs positive errors and mesh sizes");
    }
    std::vector<double> out;
    for (std::size_t i = 1; i < errors.size(); ++i) {
        SURFSTOKES_THROW_IF(hs[i] == hs[i - 1], ErrorCode::Domain, "eoc needs distinct mesh sizes");
        out.push_back(std::log(errors[i - 1] / errors[i]) / std::log(hs[i - 1] / hs[i]));
    }
    return out;
}

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> names{
        "level",    "h",       "ndof_u",  "ndof_p",     "ndof_l",  "e_u_l2",
        "e_ut_l2",  "e_un_l2", "e_u_energy", "e_u_cov", "e_u_dir", "e_u_div",
        "e_p_l2",   "e_l_l2",  "e_l_hm1", "geo_d",      "geo_n",   "geo_mu"};
    return names;
}

std::vector<double> csv_values(const ErrorReport& r) {
    return {static_cast<double>(r.level), r.h, static_cast<double>(r.ndof_u),
            static_cast<double>(r.ndof_p), static_cast<double>(r.ndof_l), r.u_l2,
            r.u_l2_tangential, r.u_l2_normal, r.u_energy, r.u_cov, r.u_dir, r.u_div,
            r.p_l2, r.l_l2, r.l_hminus1, r.geo.max_distance, r.geo.max_normal_error,
            r.geo.max_area_error};
}

void write_csv(std::ostream& os, const std::vector<ErrorReport>& reports) {
    const auto& names = csv_columns();
    for (std::size_t c = 0; c < names.size(); ++c) os << (c ? "," : "") << names[c];
    os << '\n';
    std::vector<std::vector<double>> rows;
    for (const auto& r : reports) {
        rows.push_back(csv_values(r));
        write_row(os, rows.back(), {0, 2, 3, 4});
    }
    write_eoc_block(os, names, 5, rows, 1);
}

void write_probe_csv(std::ostream& os, const std::vector<int>& levels, const std::vector<double>& hs,
                     const std::vector<GeometricProbes>& probes) {
    SURFSTOKES_THROW_IF(levels.size() != hs.size() || levels.size() != probes.size(), ErrorCode::Internal,
                        "probe table columns differ in length");
    const std::vector<std::string> names{"level", "h", "geo_d", "geo_n", "geo_mu"};
    for (std::size_t c = 0; c < names.size(); ++c) os << (c ? "," : "") << names[c];
    os << '\n';
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        rows.push_back({static_cast<double>(levels[i]), hs[i], probes[i].max_distance,
                        probes[i].max_normal_error, probes[i].max_area_error});
        write_row(os, rows.back(), {0});
    }
    write_eoc_block(os, names, 2, rows, 1);
    if (levels.size() < 3) return;
    os << "fit_first,fit_last,slope_geo_d,slope_geo_n,slope_geo_mu\n";
    std::vector<double> fit{static_cast<double>(levels.front()), static_cast<double>(levels.back())};
    for (std::size_t c = 2; c < names.size(); ++c) {
        std::vector<double> e;
        for (const auto& r : rows) e.push_back(r[c]);
        fit.push_back(safe_slope(e, hs));
    }
    write_row(os, fit, {0, 1});
}

std::vector<double> column_eoc(const std::vector<ErrorReport>& reports, std::string_view column) {
    const auto& names = csv_columns();
    std::size_t c = 0;
    while (c < names.size() && names[c] != column) ++c;
    SURFSTOKES_THROW_IF(c == names.size(), ErrorCode::Config, "unknown column '" + std::string(column) + "'");
    std::vector<double> e, h;
    for (const auto& r : reports) {
        const std::vector<double> v = csv_values(r);
        e.push_back(v[c]);
        h.push_back(r.h);
    }
    return safe_eoc(e, h);
}

}  // namespace surfstokes::analysis
