#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "surfstokes/errors.hpp"
#include "surfstokes/experiment/experiment.hpp"
#include "surfstokes/linalg/sparse.hpp"

using namespace surfstokes;
using experiment::ExperimentConfig;
using experiment::LevelRange;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Internal;
}

template <class F>
std::string message_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

ExperimentConfig small(const std::string& surface, const std::string& method) {
    ExperimentConfig c;
    experiment::apply_setting(c, "surface", surface);
    experiment::apply_setting(c, "method", method);
    experiment::apply_setting(c, "levels", "0..1");
    return c;
}

std::filesystem::path scratch(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("surfstokes_test_" + name);
}

}  // namespace

TEST(LevelRange, Parses) {
    EXPECT_EQ(experiment::parse_level_range("1..4"), (LevelRange{1, 4}));
    EXPECT_EQ(experiment::parse_level_range(" 2 "), (LevelRange{2, 2}));
    EXPECT_EQ(experiment::parse_level_range("0 .. 3"), (LevelRange{0, 3}));
    EXPECT_EQ(experiment::parse_level_range("1..4").count(), 4);
}

TEST(LevelRange, RejectsEmptyMalformedAndOutOfRange) {
    for (const char* bad : {"3..1", "", "..", "a..2", "1..", "1...3", "-1..2", "0..99", "2.5"})
        EXPECT_EQ(code_of([&] { experiment::parse_level_range(bad); }), ErrorCode::Config) << bad;
    EXPECT_NE(message_of([] { experiment::parse_level_range("3..1"); }).find("empty"), std::string::npos);
}

TEST(Config, DegreeDefaults) {
    ExperimentConfig c;
    auto s = c.system();
    EXPECT_EQ(s.ku, 2);
    EXPECT_EQ(s.kpr, 1);
    EXPECT_EQ(s.klambda, 1);
    EXPECT_EQ(s.kg, 2);
    EXPECT_EQ(s.kp, 3);
    c.ku = 3;
    s = c.system();
    EXPECT_EQ(s.kpr, 2);
    EXPECT_EQ(s.klambda, 2);
    EXPECT_EQ(s.kg, 3);
    EXPECT_EQ(s.kp, 4);
    c.kg = 2;
    EXPECT_EQ(c.system().kp, 3);
}

TEST(Config, MultiplierDefaultFollowsMethod) {
    ExperimentConfig c;
    EXPECT_EQ(c.system().multiplier, geometry::MultiplierChoice::Linear);
    experiment::apply_setting(c, "method", "penalty");
    EXPECT_EQ(c.system().multiplier, geometry::MultiplierChoice::Zero);
    experiment::apply_setting(c, "lambda_exact", "linear");
    EXPECT_EQ(c.system().multiplier, geometry::MultiplierChoice::Linear);
}

TEST(Config, InvalidDegreesAreConfigErrors) {
    ExperimentConfig c;
    c.ku = 1;
    EXPECT_EQ(code_of([&] { c.system(); }), ErrorCode::Config);
    c.ku = 2;
    c.kpr = 2;
    EXPECT_EQ(code_of([&] { c.system(); }), ErrorCode::Config);
    c.allow_unstable = true;
    EXPECT_NO_THROW(c.system());
}

TEST(Config, LoadsKeyValueLines) {
    std::istringstream in("# sweep\n\nsurface = biconcave\nmethod=penalty  # trailing\nku = 3\nlevels = 2..3\n"
                          "eta-exp = 1.5\nthreads = 2\nallow_unstable = yes\n");
    ExperimentConfig c;
    experiment::load_config(c, in);
    EXPECT_EQ(c.surface, geometry::SurfaceKind::Biconcave);
    EXPECT_EQ(c.method, assembly::Method::Penalty);
    EXPECT_EQ(c.ku, 3);
    EXPECT_EQ(c.levels, (LevelRange{2, 3}));
    EXPECT_DOUBLE_EQ(c.eta_exponent, 1.5);
    EXPECT_EQ(c.threads, 2);
    EXPECT_TRUE(c.allow_unstable);
}

TEST(Config, ErrorsCarryLineNumbers) {
    const auto load = [](const std::string& text) {
        std::istringstream in(text);
        ExperimentConfig c;
        experiment::load_config(c, in);
    };
    EXPECT_EQ(code_of([&] { load("ku = 2\ncolour = red\n"); }), ErrorCode::Config);
    EXPECT_NE(message_of([&] { load("ku = 2\ncolour = red\n"); }).find("config line 2"), std::string::npos);
    EXPECT_NE(message_of([&] { load("\n\nku two\n"); }).find("config line 3"), std::string::npos);
    EXPECT_EQ(code_of([&] { load("ku = 2x\n"); }), ErrorCode::Config);
    EXPECT_EQ(code_of([&] { load("mu = nan\n"); }), ErrorCode::Config);
    EXPECT_EQ(code_of([&] { load("threads = 0\n"); }), ErrorCode::Config);
    EXPECT_EQ(code_of([&] { load("surface = torus\n"); }), ErrorCode::Config);
    ExperimentConfig c;
    EXPECT_EQ(code_of([&] { experiment::load_config_file(c, "/nonexistent/dir/x.cfg"); }), ErrorCode::Io);
}

TEST(Runs, ConvergenceTableHasOneRowPerLevel) {
    const auto records = experiment::run_convergence(small("sphere", "lagrange"));
    ASSERT_EQ(records.size(), 2u);
    for (const auto& r : records) {
        EXPECT_EQ(r.inertia.positive, r.n_u + 1);
        EXPECT_EQ(r.inertia.negative, r.n_p + r.n_l);
        EXPECT_EQ(r.inertia.zero, 0);
        EXPECT_LE(r.relative_residual, 1e-9);
    }
    const auto t = experiment::convergence_table(records);
    EXPECT_EQ(t.rows.size(), 2u);
    EXPECT_TRUE(t.summary.count("eoc_e_u_l2"));
    EXPECT_TRUE(t.summary.count("eoc_tangency"));
    EXPECT_TRUE(t.summary.count("max_solve_residual"));
}

TEST(Runs, CsvIsDeterministicAcrossRunsAndThreads) {
    ExperimentConfig c = small("varying", "penalty");
    const std::string a = experiment::convergence_table(experiment::run_convergence(c)).csv;
    const std::string b = experiment::convergence_table(experiment::run_convergence(c)).csv;
    c.threads = 4;
    const std::string d = experiment::convergence_table(experiment::run_convergence(c)).csv;
    EXPECT_EQ(a, b);
    // Timings are not part of the table, so thread count must not show.
    EXPECT_EQ(a, d);
}

TEST(Runs, LogGetsOneLinePerLevel) {
    ExperimentConfig c = small("sphere", "lagrange");
    std::vector<std::string> lines;
    c.log = [&](const std::string& s) { lines.push_back(s); };
    experiment::run_convergence(c);
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0].rfind("level 0:", 0), 0u);
    EXPECT_EQ(lines[1].rfind("level 1:", 0), 0u);
}

TEST(Runs, ProbeTableSlopes) {
    ExperimentConfig c;
    c.kg = 1;
    c.levels = LevelRange{1, 3};
    const auto p = experiment::run_probe(c);
    ASSERT_EQ(p.levels.size(), 3u);
    EXPECT_NEAR(p.slope_distance, 2.0, 0.3);
    EXPECT_NEAR(p.slope_normal, 1.0, 0.2);
    const auto t = experiment::probe_table(p);
    EXPECT_DOUBLE_EQ(t.summary.at("slope_geo_d"), p.slope_distance);
}

TEST(Runs, InfsupFlagsEqualOrderPair) {
    ExperimentConfig c;
    c.levels = LevelRange{0, 1};
    const auto stable = experiment::run_infsup(c);
    EXPECT_FALSE(stable.unstable);
    EXPECT_GT(stable.ratio, experiment::kStableRatio);
    for (const auto& r : stable.rows) EXPECT_EQ(r.estimate.zero_modes, 0);

    c.ku = 1;
    c.kpr = 1;
    c.klambda = 1;
    c.kg = 1;
    const auto p1 = experiment::run_infsup(c);
    EXPECT_TRUE(p1.unstable);
    const auto t = experiment::infsup_table(p1);
    EXPECT_EQ(t.summary.at("unstable"), 1.0);
}

TEST(Runs, InfsupRejectsPenalty) {
    ExperimentConfig c = small("sphere", "penalty");
    EXPECT_EQ(code_of([&] { experiment::run_infsup(c); }), ErrorCode::Config);
}

TEST(Runs, FailuresNameTheLevel) {
    ExperimentConfig c;
    c.levels = LevelRange{0, 5};
    const std::string msg = message_of([&] { experiment::run_infsup(c); });
    EXPECT_EQ(code_of([&] { experiment::run_infsup(c); }), ErrorCode::TooLarge);
    EXPECT_NE(msg.find("level "), std::string::npos) << msg;
}

TEST(Export, VtkPointsLieOnCurvedElements) {
    ExperimentConfig c = small("biconcave", "lagrange");
    c.kg = 3;
    const assembly::Discretization d(c.system(), 0);
    const auto sol = assembly::solve(assembly::build_system(d));
    std::ostringstream os;
    experiment::write_vtk(os, d, sol);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# vtk DataFile Version 3.0");
    while (std::getline(in, line) && line.rfind("POINTS", 0) != 0) {
    }
    int npts = 0;
    std::sscanf(line.c_str(), "POINTS %d", &npts);
    const int n = 3, ne = d.mesh().num_elements();
    ASSERT_EQ(npts, ne * (n + 1) * (n + 2) / 2);
    // First element, first lattice row (j = 0): reference points (i/n, 0).
    for (int i = 0; i <= n; ++i) {
        Eigen::Vector3d x;
        in >> x[0] >> x[1] >> x[2];
        const Eigen::Vector3d ref = d.mesh().element_geometry(0, fem::RefPoint(double(i) / n, 0.0)).x;
        EXPECT_LT((x - ref).norm(), 1e-12);
    }
    const std::string s = os.str();
    EXPECT_NE(s.find("VECTORS u double"), std::string::npos);
    EXPECT_NE(s.find("SCALARS p double"), std::string::npos);
    EXPECT_NE(s.find("SCALARS lambda double"), std::string::npos);
}

TEST(Export, PenaltyVtkHasNoMultiplier) {
    ExperimentConfig c = small("sphere", "penalty");
    const assembly::Discretization d(c.system(), 0);
    std::ostringstream os;
    experiment::write_vtk(os, d, assembly::solve(assembly::build_system(d)));
    EXPECT_EQ(os.str().find("lambda"), std::string::npos);
}

TEST(Export, MatrixRoundTrip) {
    ExperimentConfig c = small("sphere", "lagrange");
    c.levels = LevelRange{0, 0};
    const auto path = scratch("system.mtx").string();
    experiment::export_matrix(c, path);
    EXPECT_EQ(experiment::rhs_path_for(path), scratch("system_rhs.mtx").string());
    const auto k = linalg::read_matrix_market(path);
    const auto rhs = linalg::read_matrix_market(experiment::rhs_path_for(path));

    const assembly::Discretization d(c.system(), 0);
    const auto sys = assembly::build_system(d);
    const Eigen::MatrixXd expect = sys.matrix().to_dense();
    ASSERT_EQ(k.rows(), sys.size());
    EXPECT_LE((k.to_dense() - expect).cwiseAbs().maxCoeff(), 1e-15 * expect.cwiseAbs().maxCoeff());
    ASSERT_EQ(rhs.rows(), sys.size());
    ASSERT_EQ(rhs.cols(), 1);
    EXPECT_LE((rhs.to_dense().col(0) - sys.rhs()).cwiseAbs().maxCoeff(), 1e-15 * sys.rhs().cwiseAbs().maxCoeff());
    std::filesystem::remove(path);
    std::filesystem::remove(experiment::rhs_path_for(path));
}

TEST(Export, UnwritablePathIsIoError) {
    ExperimentConfig c = small("sphere", "lagrange");
    c.levels = LevelRange{0, 0};
    EXPECT_EQ(code_of([&] { experiment::export_vtk(c, "/nonexistent/dir/x.vtk"); }), ErrorCode::Io);
}
