#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "surfstokes/assembly/system.hpp"
#include "surfstokes/fem/quadrature.hpp"
#include "surfstokes/mesh/curved_mesh.hpp"

namespace surfstokes::analysis {

struct GeometricProbes {
    double max_distance = 0.0;      // max |d|
    double max_normal_error = 0.0;  // max |n - n_h|
    double max_area_error = 0.0;    // max |1 - mu_h|
};

/// Maxima over all points of `rule` on every element.
GeometricProbes geometric_probes(const mesh::CurvedMesh& mesh, const fem::QuadratureRule& rule,
                                 int threads = 1);

struct ErrorReport {
    int level = 0;
    double h = 0.0;
    int ndof_u = 0;
    int ndof_p = 0;
    int ndof_l = 0;
    double u_l2 = 0.0;             // ||u^-l - u_h||
    double u_l2_tangential = 0.0;  // ||P (u^-l - u_h)||, P = P o pi
    double u_l2_normal = 0.0;      // ||(u^-l - u_h) . n o pi||
    double u_energy = 0.0;         // (2 mu ||E - E_h||^2 + ||u - u_h||^2)^1/2
    double u_cov = 0.0;            // ||P grad u - P_h grad_h u_h||
    double u_dir = 0.0;            // ||grad u - grad_h u_h||
    double u_div = 0.0;
    double p_l2 = 0.0;             // mean-shifted
    double l_l2 = 0.0;             // NaN for the penalty method
    double l_hminus1 = 0.0;        // NaN for the penalty method
    GeometricProbes geo;
    /// ||u_h . n_h|| for the Lagrange method, ||u_h . n~_h|| for the penalty
    /// method.
    double tangency = 0.0;
};

/// Discrete solution coefficients (velocity, pressure, multiplier).
struct DiscreteSolution {
    Eigen::VectorXd u;
    Eigen::VectorXd p;
    Eigen::VectorXd l;
};

/// Error norms of a discrete solution against the exact fields, integrated
/// over the discrete surface with the discretization's quadrature.
ErrorReport error_norms(const assembly::Discretization& disc, const DiscreteSolution& sol);

/// eoc_l = log(e_{l-1}/e_l) / log(h_{l-1}/h_l); one entry per consecutive
/// pair. Throws Domain on mismatched lengths, fewer than two entries or
/// nonpositive values.
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs);

/// Least-squares slope of log(e) against log(h) over all entries. Same
/// preconditions as eoc().
double loglog_slope(const std::vector<double>& errors, const std::vector<double>& hs);

/// Column names of the convergence CSV, in order.
const std::vector<std::string>& csv_columns();

/// Values of one report in csv_columns() order.
std::vector<double> csv_values(const ErrorReport& r);

/// One row per level, then an eoc_* header and one row per consecutive
/// level pair. Values with 16 significant digits; missing EOCs as nan.
void write_csv(std::ostream& os, const std::vector<ErrorReport>& reports);

/// Probe table: level,h,geo_d,geo_n,geo_mu followed by the eoc block and,
/// for three or more levels, one row of least-squares slopes over all
/// levels (header fit_first,fit_last,slope_geo_d,slope_geo_n,slope_geo_mu).
void write_probe_csv(std::ostream& os, const std::vector<int>& levels, const std::vector<double>& hs,
                     const std::vector<GeometricProbes>& probes);

/// EOC of one named CSV column over the reports, NaN where undefined.
/// Throws Config for an unknown column.
std::vector<double> column_eoc(const std::vector<ErrorReport>& reports, std::string_view column);

}  // namespace surfstokes::analysis
