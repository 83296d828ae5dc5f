#include <cstdio>
#include <fstream>
#include <ostream>

#include "surfstokes/errors.hpp"
#include "surfstokes/experiment/experiment.hpp"
#include "surfstokes/fem/function_space.hpp"

namespace surfstokes::experiment {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Reference points (i/n, j/n), i + j <= n, row by row in j.
std::vector<fem::RefPoint> lattice(int n) {
    std::vector<fem::RefPoint> pts;
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n - j; ++i) pts.emplace_back(double(i) / n, double(j) / n);
    }
    return pts;
}

int lattice_index(int n, int i, int j) {
    // Rows 0..j-1 hold (n+1) + n + ... + (n-j+2) points.
    return j * (n + 1) - j * (j - 1) / 2 + i;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    SURFSTOKES_THROW_IF(!os, ErrorCode::Io, "cannot open '" + path + "' for writing");
    return os;
}

void check_written(std::ostream& os, const std::string& path) {
    os.flush();
    SURFSTOKES_THROW_IF(!os, ErrorCode::Io, "writing '" + path + "' failed");
}

}  // namespace

void write_vtk(std::ostream& os, const assembly::Discretization& disc, const assembly::Solution& sol) {
    const mesh::CurvedMesh& mesh = disc.mesh();
    const int n = mesh.kg();
    const std::vector<fem::RefPoint> ref = lattice(n);
    const int per = static_cast<int>(ref.size());
    const int ne = mesh.num_elements();
    const int npts = ne * per;
    const int ntri = ne * n * n;

    os << "# vtk DataFile Version 3.0\n"
       << "surfstokes solution, level " << disc.level() << '\n'
       << "ASCII\nDATASET POLYDATA\n"
       << "POINTS " << npts << " double\n";
    for (int e = 0; e < ne; ++e) {
        for (const auto& x : ref) {
            const Eigen::Vector3d p = mesh.element_geometry(e, x).x;
            os << num(p[0]) << ' ' << num(p[1]) << ' ' << num(p[2]) << '\n';
        }
    }
    os << "POLYGONS " << ntri << ' ' << 4 * ntri << '\n';
    for (int e = 0; e < ne; ++e) {
        const int base = e * per;
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n - j; ++i) {
                const int a = base + lattice_index(n, i, j);
                const int b = base + lattice_index(n, i + 1, j);
                const int c = base + lattice_index(n, i, j + 1);
                os << "3 " << a << ' ' << b << ' ' << c << '\n';
                if (i + j < n - 1) {
                    const int d = base + lattice_index(n, i + 1, j + 1);
                    os << "3 " << b << ' ' << d << ' ' << c << '\n';
                }
            }
        }
    }

    os << "POINT_DATA " << npts << '\n' << "VECTORS u double\n";
    const fem::FunctionSpace& u = disc.velocity();
    for (int e = 0; e < ne; ++e) {
        const Eigen::VectorXd local = fem::gather(u, e, sol.u);
        for (const auto& x : ref) {
            const Eigen::VectorXd phi = u.element().values(x);
            Eigen::Vector3d v = Eigen::Vector3d::Zero();
            for (int i = 0; i < phi.size(); ++i) v += phi[i] * local.segment<3>(3 * i);
            os << num(v[0]) << ' ' << num(v[1]) << ' ' << num(v[2]) << '\n';
        }
    }
    const auto scalars = [&](const char* name, const fem::FunctionSpace& s, const Eigen::VectorXd& coeffs) {
        os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (int e = 0; e < ne; ++e) {
            const Eigen::VectorXd local = fem::gather(s, e, coeffs);
            for (const auto& x : ref) os << num(s.element().values(x).dot(local)) << '\n';
        }
    };
    scalars("p", disc.pressure(), sol.p);
    if (disc.has_multiplier()) scalars("lambda", disc.multiplier(), sol.l);
}

void export_vtk(const ExperimentConfig& config, const std::string& path) {
    const assembly::SystemConfig sys = config.system();
    const int level = config.level_range(kDefaultRunLevels).last;
    const assembly::Discretization disc(sys, level);
    assembly::AssemblyOptions opt;
    opt.threads = sys.threads;
    const assembly::Solution sol = assembly::solve(assembly::build_system(disc, opt));
    std::ofstream os = open_out(path);
    write_vtk(os, disc, sol);
    check_written(os, path);
}

std::string rhs_path_for(const std::string& matrix_path) {
    const std::string ext = ".mtx";
    if (matrix_path.size() > ext.size() && matrix_path.ends_with(ext))
        return matrix_path.substr(0, matrix_path.size() - ext.size()) + "_rhs.mtx";
    return matrix_path + "_rhs.mtx";
}

void export_matrix(const ExperimentConfig& config, const std::string& path) {
    const assembly::SystemConfig sys = config.system();
    const int level = config.level_range(kDefaultRunLevels).last;
    const assembly::Discretization disc(sys, level);
    assembly::AssemblyOptions opt;
    opt.threads = sys.threads;
    const assembly::SaddleSystem system = assembly::build_system(disc, opt);
    {
        std::ofstream os = open_out(path);
        linalg::write_matrix_market(os, system.matrix(), linalg::MatrixMarketSymmetry::Symmetric);
        check_written(os, path);
    }
    const std::string rhs_path = rhs_path_for(path);
    std::ofstream os = open_out(rhs_path);
    linalg::write_matrix_market(os, linalg::SparseMatrix::from_dense(system.rhs()),
                                linalg::MatrixMarketSymmetry::General);
    check_written(os, rhs_path);
}

}  // namespace surfstokes::experiment
