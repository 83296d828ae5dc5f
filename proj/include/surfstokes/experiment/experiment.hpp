#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "surfstokes/analysis/errors.hpp"
#include "surfstokes/assembly/system.hpp"
#include "surfstokes/linalg/diagnostics.hpp"

namespace surfstokes::experiment {

struct LevelRange {
    int first = 0;
    int last = 0;

    int count() const { return last - first + 1; }
    friend bool operator==(const LevelRange&, const LevelRange&) = default;
};

/// "a..b" or a single level "a". Throws Config when malformed, out of
/// 0..kMaxLevel, or empty (a > b).
LevelRange parse_level_range(std::string_view text);

inline constexpr LevelRange kDefaultRunLevels{1, 4};
inline constexpr LevelRange kDefaultProbeLevels{4, 6};
inline constexpr LevelRange kDefaultInfsupLevels{0, 2};

/// Experiment settings. Unset degrees follow the Taylor-Hood defaults:
/// ku = 2, kpr = max(1, ku - 1), klambda = max(1, ku - 1), kg = ku, kp = kg + 1.
/// An unset exact multiplier is linear for the Lagrange method and zero for
/// the penalty method, whose tangency penalty otherwise carries an
/// O(lambda / eta) consistency error.
struct ExperimentConfig {
    geometry::SurfaceKind surface = geometry::SurfaceKind::Sphere;
    assembly::Method method = assembly::Method::Lagrange;
    std::optional<int> ku, kpr, klambda, kg, kp;
    double mu = 1.0;
    double eta_exponent = 2.0;
    int quad = -1;
    std::optional<geometry::MultiplierChoice> lambda_exact;
    std::optional<LevelRange> levels;
    int threads = 1;
    bool allow_unstable = false;
    std::string out;
    /// Progress lines, one call per line.
    std::function<void(const std::string&)> log;

    /// Resolved and validated system configuration.
    assembly::SystemConfig system() const;
    LevelRange level_range(LevelRange fallback) const { return levels.value_or(fallback); }
};

/// Sets one key. Keys: surface, method, ku, kpr, klambda, kg, kp, mu,
/// eta_exp, levels, quad, lambda_exact, threads, out, allow_unstable.
/// Throws Config on unknown keys or unparsable values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Line-oriented key=value input; blank lines and '#' comments are skipped.
void load_config(ExperimentConfig& config, std::istream& in);
void load_config_file(ExperimentConfig& config, const std::string& path);

/// Everything measured at one level of a convergence run.
struct LevelRecord {
    analysis::ErrorReport errors;
    int n_u = 0, n_p = 0, n_l = 0;
    linalg::Inertia inertia;
    assembly::ConstraintResiduals residuals;
    double rhs_norm = 0.0;           // max norm of the system right-hand side
    double relative_residual = 0.0;  // of the linear solve
};

/// Refinement sweep: mesh, spaces, system, solve and error norms per level.
/// Errors from any module are rethrown with the level attached.
std::vector<LevelRecord> run_convergence(const ExperimentConfig& config);

struct ProbeTable {
    std::vector<int> levels;
    std::vector<double> hs;
    std::vector<analysis::GeometricProbes> probes;
    /// Least-squares slopes over all levels (NaN for fewer than two).
    double slope_distance = 0.0;
    double slope_normal = 0.0;
    double slope_area = 0.0;
};

/// Geometric probes of the curved mesh of degree kg on each level.
ProbeTable run_probe(const ExperimentConfig& config);

struct InfsupRow {
    int level = 0;
    double h = 0.0;
    linalg::InfSupEstimate estimate;
};

struct InfsupTable {
    std::vector<InfsupRow> rows;
    double ratio = 0.0;     // min beta / max beta
    bool unstable = false;  // zero modes on some level, or ratio < kStableRatio
};

inline constexpr double kStableRatio = 0.5;

/// Inf-sup constant of the Lagrange constraint pair (pressure with zero
/// mean, multiplier) against the velocity energy norm. Lagrange method only;
/// dense, so only coarse levels fit under linalg::kDenseCap.
InfsupTable run_infsup(const ExperimentConfig& config);

/// Solves on the finest level of the range and writes legacy VTK polydata
/// with point vectors u and scalars p (and lambda for the Lagrange method).
/// Each curved element is split into kg^2 flat triangles.
void export_vtk(const ExperimentConfig& config, const std::string& path);
void write_vtk(std::ostream& os, const assembly::Discretization& disc, const assembly::Solution& sol);

/// Writes the saddle matrix of the finest level (symmetric MatrixMarket) to
/// `path` and the right-hand side as a one-column general matrix to
/// rhs_path_for(path).
void export_matrix(const ExperimentConfig& config, const std::string& path);
std::string rhs_path_for(const std::string& matrix_path);

/// Named numeric table with its CSV rendering and scalar summaries.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string csv;
    std::map<std::string, double> summary;
};

/// Summary keys: eoc_<column> at the finest pair for every error column,
/// eoc_tangency, max_residual_ratio (constraint residual over max|rhs|) and
/// max_solve_residual.
Table convergence_table(const std::vector<LevelRecord>& records);
/// Summary keys: slope_geo_d, slope_geo_n, slope_geo_mu.
Table probe_table(const ProbeTable& probes);
/// Summary keys: ratio, unstable, zero_modes.
Table infsup_table(const InfsupTable& table);

}  // namespace surfstokes::experiment
