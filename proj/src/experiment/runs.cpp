#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <new>
#include <sstream>

#include "surfstokes/assembly/forms.hpp"
#include "surfstokes/errors.hpp"
#include "surfstokes/experiment/experiment.hpp"
#include "surfstokes/fem/quadrature.hpp"
#include "surfstokes/mesh/base_mesh.hpp"
#include "surfstokes/mesh/curved_mesh.hpp"

namespace surfstokes::experiment {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

void log(const ExperimentConfig& c, const std::string& line) {
    if (c.log) c.log(line);
}

// Runs body(level) for every level, attaching the level to any failure.
template <class Body>
void for_levels(LevelRange range, Body&& body) {
    for (int level = range.first; level <= range.last; ++level) {
        try {
            body(level);
        } catch (const Error& e) {
            throw Error(e.code(), "level " + std::to_string(level) + ": " + e.what());
        } catch (const std::bad_alloc&) {
            throw Error(ErrorCode::TooLarge, "level " + std::to_string(level) + ": out of memory");
        }
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double last_eoc(const std::vector<double>& e, const std::vector<double>& h) {
    const std::size_t n = e.size();
    if (n < 2 || !(e[n - 1] > 0.0) || !(e[n - 2] > 0.0) || !std::isfinite(e[n - 1]) || !std::isfinite(e[n - 2]))
        return kNaN;
    return analysis::eoc({e[n - 2], e[n - 1]}, {h[n - 2], h[n - 1]})[0];
}

double slope_or_nan(const std::vector<double>& e, const std::vector<double>& h) {
    if (e.size() < 2) return kNaN;
    for (double v : e) {
        if (!(v > 0.0) || !std::isfinite(v)) return kNaN;
    }
    return analysis::loglog_slope(e, h);
}

}  // namespace

std::vector<LevelRecord> run_convergence(const ExperimentConfig& config) {
    const assembly::SystemConfig sys = config.system();
    const LevelRange range = config.level_range(kDefaultRunLevels);
    std::vector<LevelRecord> out;
    for_levels(range, [&](int level) {
        const auto t0 = std::chrono::steady_clock::now();
        const assembly::Discretization disc(sys, level);
        assembly::AssemblyOptions opt;
        opt.threads = sys.threads;
        const assembly::SaddleSystem system = assembly::build_system(disc, opt);
        const assembly::Solution sol = assembly::solve(system);

        LevelRecord rec;
        rec.errors = analysis::error_norms(disc, {sol.u, sol.p, sol.l});
        rec.n_u = system.n_u();
        rec.n_p = system.n_p();
        rec.n_l = system.n_l();
        rec.inertia = sol.inertia;
        rec.residuals = assembly::constraint_residuals(system, sol);
        rec.rhs_norm = system.rhs().lpNorm<Eigen::Infinity>();
        rec.relative_residual = sol.report.relative_residual;
        out.push_back(rec);
        log(config, "level " + std::to_string(level) + ": " + std::to_string(system.size()) + " unknowns, " +
                        fmt("%.2f s", seconds_since(t0)) + ", e_u_l2 " + fmt("%.3e", rec.errors.u_l2));
    });
    return out;
}

ProbeTable run_probe(const ExperimentConfig& config) {
    const assembly::SystemConfig sys = config.system();
    const LevelRange range = config.level_range(kDefaultProbeLevels);
    const geometry::LevelSetSurface surface(sys.surface);
    const fem::QuadratureRule rule = fem::make_quadrature(sys.quad >= 0 ? sys.quad : 2 * sys.kg + 2);
    ProbeTable t;
    for_levels(range, [&](int level) {
        const mesh::CurvedMesh m(mesh::base_mesh_for(surface, level), surface, sys.kg);
        t.levels.push_back(level);
        t.hs.push_back(m.h());
        t.probes.push_back(analysis::geometric_probes(m, rule, sys.threads));
        log(config, "level " + std::to_string(level) + ": max|d| " + fmt("%.3e", t.probes.back().max_distance));
    });
    std::vector<double> d, n, a;
    for (const auto& p : t.probes) {
        d.push_back(p.max_distance);
        n.push_back(p.max_normal_error);
        a.push_back(p.max_area_error);
    }
    t.slope_distance = slope_or_nan(d, t.hs);
    t.slope_normal = slope_or_nan(n, t.hs);
    t.slope_area = slope_or_nan(a, t.hs);
    return t;
}

InfsupTable run_infsup(const ExperimentConfig& config) {
    SURFSTOKES_THROW_IF(config.method != assembly::Method::Lagrange, ErrorCode::Config,
                        "the inf-sup estimate needs the lagrange method");
    // Unstable pairs are what this diagnostic is for, so the Taylor-Hood
    // degree checks are skipped.
    ExperimentConfig relaxed = config;
    relaxed.allow_unstable = true;
    const assembly::SystemConfig sys = relaxed.system();
    const LevelRange range = config.level_range(kDefaultInfsupLevels);

    InfsupTable t;
    for_levels(range, [&](int level) {
        const assembly::Discretization disc(sys, level);
        assembly::AssemblyOptions opt;
        opt.threads = sys.threads;
        const fem::GeometryCache& geo = disc.geometry();
        const int nu = disc.velocity().num_dofs();
        const int np = disc.pressure().num_dofs();
        const int nl = disc.multiplier().num_dofs();
        SURFSTOKES_THROW_IF(nu + np + nl > linalg::kDenseCap, ErrorCode::TooLarge,
                            "inf-sup estimate needs " + std::to_string(nu + np + nl) +
                                " dense unknowns, cap is " + std::to_string(linalg::kDenseCap));
        const linalg::SparseMatrix a = assembly::assemble_a(disc.velocity(), geo, sys.mu, opt);
        const linalg::SparseMatrix bp = assembly::assemble_b_pressure(disc.velocity(), disc.pressure(), geo, opt);
        const linalg::SparseMatrix bl = assembly::assemble_b_multiplier(disc.velocity(), disc.multiplier(), geo, opt);
        const linalg::SparseMatrix mp = assembly::assemble_mass(disc.pressure(), geo, opt);
        const linalg::SparseMatrix ml = assembly::assemble_mass(disc.multiplier(), geo, opt);
        const linalg::SparseMatrix b =
            linalg::assemble_blocks(np + nl, nu, {{&bp, 0, 0, false}, {&bl, np, 0, false}});
        const linalg::SparseMatrix m =
            linalg::assemble_blocks(np + nl, np + nl, {{&mp, 0, 0, false}, {&ml, np, np, false}});
        Eigen::VectorXd c = Eigen::VectorXd::Zero(np + nl);
        c.head(np) = assembly::assemble_mean(disc.pressure(), geo);

        InfsupRow row;
        row.level = level;
        row.h = disc.mesh().h();
        row.estimate = linalg::estimate_infsup(a, b, m, c);
        t.rows.push_back(row);
        log(config, "level " + std::to_string(level) + ": beta " + fmt("%.4f", row.estimate.beta) + ", " +
                        std::to_string(row.estimate.zero_modes) + " zero modes");
    });

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& r : t.rows) {
        const double beta = r.estimate.zero_modes > 0 ? 0.0 : r.estimate.beta;
        lo = std::min(lo, beta);
        hi = std::max(hi, beta);
        if (r.estimate.zero_modes > 0) t.unstable = true;
    }
    t.ratio = hi > 0.0 ? lo / hi : 0.0;
    if (t.ratio < kStableRatio) t.unstable = true;
    return t;
}

Table convergence_table(const std::vector<LevelRecord>& records) {
    Table t;
    t.columns = analysis::csv_columns();
    std::vector<analysis::ErrorReport> reports;
    std::vector<double> hs, tangency;
    double worst_ratio = 0.0, worst_solve = 0.0;
    for (const auto& r : records) {
        reports.push_back(r.errors);
        t.rows.push_back(analysis::csv_values(r.errors));
        hs.push_back(r.errors.h);
        tangency.push_back(r.errors.tangency);
        const double scale = r.rhs_norm > 0.0 ? r.rhs_norm : 1.0;
        worst_ratio = std::max(worst_ratio,
                               std::max(r.residuals.div_residual, r.residuals.tangency_residual) / scale);
        worst_solve = std::max(worst_solve, r.relative_residual);
    }
    std::ostringstream os;
    analysis::write_csv(os, reports);
    t.csv = os.str();
    const auto& names = analysis::csv_columns();
    for (std::size_t c = 5; c < names.size(); ++c) {
        std::vector<double> e;
        for (const auto& row : t.rows) e.push_back(row[c]);
        t.summary["eoc_" + names[c]] = last_eoc(e, hs);
    }
    t.summary["eoc_tangency"] = last_eoc(tangency, hs);
    t.summary["max_residual_ratio"] = worst_ratio;
    t.summary["max_solve_residual"] = worst_solve;
    return t;
}

Table probe_table(const ProbeTable& p) {
    Table t;
    t.columns = {"level", "h", "geo_d", "geo_n", "geo_mu"};
    for (std::size_t i = 0; i < p.levels.size(); ++i) {
        t.rows.push_back({static_cast<double>(p.levels[i]), p.hs[i], p.probes[i].max_distance,
                          p.probes[i].max_normal_error, p.probes[i].max_area_error});
    }
    std::ostringstream os;
    analysis::write_probe_csv(os, p.levels, p.hs, p.probes);
    t.csv = os.str();
    t.summary["slope_geo_d"] = p.slope_distance;
    t.summary["slope_geo_n"] = p.slope_normal;
    t.summary["slope_geo_mu"] = p.slope_area;
    return t;
}

Table infsup_table(const InfsupTable& s) {
    Table t;
    t.columns = {"level", "h", "beta", "beta_raw", "zero_modes", "dimension"};
    std::ostringstream os;
    os << "level,h,beta,beta_raw,zero_modes,dimension\n";
    int zero_modes = 0;
    for (const auto& r : s.rows) {
        t.rows.push_back({static_cast<double>(r.level), r.h, r.estimate.beta, r.estimate.beta_raw,
                          static_cast<double>(r.estimate.zero_modes), static_cast<double>(r.estimate.dimension)});
        os << r.level << ',' << fmt("%.16g", r.h) << ',' << fmt("%.16g", r.estimate.beta) << ','
           << fmt("%.16g", r.estimate.beta_raw) << ',' << r.estimate.zero_modes << ',' << r.estimate.dimension
           << '\n';
        zero_modes += r.estimate.zero_modes;
    }
    os << "ratio,unstable\n" << fmt("%.16g", s.ratio) << ',' << (s.unstable ? 1 : 0) << '\n';
    t.csv = os.str();
    t.summary["ratio"] = s.ratio;
    t.summary["unstable"] = s.unstable ? 1.0 : 0.0;
    t.summary["zero_modes"] = zero_modes;
    return t;
}

}  // namespace surfstokes::experiment
