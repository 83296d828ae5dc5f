#include "surfstokes/linalg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "surfstokes/errors.hpp"

namespace surfstokes::linalg {

SparseMatrix SparseMatrix::from_pattern(int rows, int cols, std::vector<std::vector<int>> pattern) {
    SURFSTOKES_THROW_IF(static_cast<int>(pattern.size()) != rows, ErrorCode::Internal,
                        "pattern row count mismatch");
    SparseMatrix a(rows, cols);
    long nnz = 0;
    for (int i = 0; i < rows; ++i) {
        auto& r = pattern[i];
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        nnz += static_cast<long>(r.size());
        a.row_ptr_[i + 1] = nnz;
    }
    a.col_idx_.reserve(nnz);
    for (auto& r : pattern) {
        for (int c : r)
            SURFSTOKES_THROW_IF(c < 0 || c >= cols, ErrorCode::Internal, "pattern column out of range");
        a.col_idx_.insert(a.col_idx_.end(), r.begin(), r.end());
        std::vector<int>().swap(r);
    }
    a.values_.assign(nnz, 0.0);
    return a;
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, const std::vector<Triplet>& triplets) {
    std::vector<std::vector<int>> pattern(rows);
    for (const auto& t : triplets) {
        SURFSTOKES_THROW_IF(t.row < 0 || t.row >= rows, ErrorCode::Internal, "triplet row out of range");
        pattern[t.row].push_back(t.col);
    }
    SparseMatrix a = from_pattern(rows, cols, std::move(pattern));
    for (const auto& t : triplets) a.add(t.row, t.col, t.value);
    return a;
}

SparseMatrix SparseMatrix::identity(int n) {
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return from_triplets(n, n, t);
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd& dense, double drop) {
    std::vector<Triplet> t;
    for (int i = 0; i < dense.rows(); ++i)
        for (int j = 0; j < dense.cols(); ++j)
            if (std::abs(dense(i, j)) > drop) t.push_back({i, j, dense(i, j)});
    return from_triplets(static_cast<int>(dense.rows()), static_cast<int>(dense.cols()), t);
}

long SparseMatrix::find(int i, int j) const {
    const auto begin = col_idx_.begin() + row_ptr_[i];
    const auto end = col_idx_.begin() + row_ptr_[i + 1];
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return -1;
    return static_cast<long>(it - col_idx_.begin());
}

double SparseMatrix::coeff(int i, int j) const {
    const long k = find(i, j);
    return k < 0 ? 0.0 : values_[k];
}

void SparseMatrix::add(int i, int j, double v) {
    const long k = find(i, j);
    SURFSTOKES_THROW_IF(k < 0, ErrorCode::Internal, "entry outside sparsity pattern");
    values_[k] += v;
}

Eigen::VectorXd SparseMatrix::multiply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(rows_);
    multiply_add(x, y);
    return y;
}

void SparseMatrix::multiply_add(const Eigen::VectorXd& x, Eigen::VectorXd& y, double a) const {
    SURFSTOKES_THROW_IF(x.size() != cols_ || y.size() != rows_, ErrorCode::Internal,
                        "matrix-vector size mismatch");
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (long k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
        y[i] += a * s;
    }
}

Eigen::VectorXd SparseMatrix::multiply_transpose(const Eigen::VectorXd& x) const {
    SURFSTOKES_THROW_IF(x.size() != rows_, ErrorCode::Internal, "transpose product size mismatch");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(cols_);
    for (int i = 0; i < rows_; ++i)
        for (long k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[col_idx_[k]] += values_[k] * x[i];
    return y;
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix t(cols_, rows_);
    std::vector<long> count(cols_ + 1, 0);
    for (int c : col_idx_) ++count[c + 1];
    for (int j = 0; j < cols_; ++j) count[j + 1] += count[j];
    t.row_ptr_ = count;
    t.col_idx_.resize(col_idx_.size());
    t.values_.resize(values_.size());
    std::vector<long> next(count.begin(), count.end() - 1);
    for (int i = 0; i < rows_; ++i)
        for (long k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            const long p = next[col_idx_[k]]++;
            t.col_idx_[p] = i;
            t.values_[p] = values_[k];
        }
    return t;
}

void SparseMatrix::prune(double tol) {
    long w = 0;
    std::vector<long> ptr(rows_ + 1, 0);
    for (int i = 0; i < rows_; ++i) {
        for (long k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            if (std::abs(values_[k]) > tol) {
                col_idx_[w] = col_idx_[k];
                values_[w] = values_[k];
                ++w;
            }
        }
        ptr[i + 1] = w;
    }
    row_ptr_ = std::move(ptr);
    col_idx_.resize(w);
    values_.resize(w);
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (long k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) = values_[k];
    return d;
}

std::vector<Triplet> SparseMatrix::triplets() const {
    std::vector<Triplet> t;
    t.reserve(col_idx_.size());
    for (int i = 0; i < rows_; ++i)
        for (long k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) t.push_back({i, col_idx_[k], values_[k]});
    return t;
}

double SparseMatrix::asymmetry() const {
    double worst = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (long k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            const int j = col_idx_[k];
            const double other = j < rows_ && i < cols_ ? coeff(j, i) : 0.0;
            worst = std::max(worst, std::abs(values_[k] - other));
        }
    return worst;
}

SparseMatrix assemble_blocks(int rows, int cols, const std::vector<BlockEntry>& blocks,
                             const std::vector<Triplet>& extra) {
    std::vector<Triplet> t;
    for (const auto& b : blocks) {
        if (b.matrix == nullptr || b.matrix->rows() == 0) continue;
        for (const auto& e : b.matrix->triplets()) {
            if (b.transposed)
                t.push_back({b.row_offset + e.col, b.col_offset + e.row, e.value});
            else
                t.push_back({b.row_offset + e.row, b.col_offset + e.col, e.value});
        }
    }
    t.insert(t.end(), extra.begin(), extra.end());
    return SparseMatrix::from_triplets(rows, cols, t);
}

void write_matrix_market(std::ostream& os, const SparseMatrix& a, MatrixMarketSymmetry sym) {
    const bool symmetric = sym == MatrixMarketSymmetry::Symmetric;
    std::vector<Triplet> t;
    for (const auto& e : a.triplets())
        if (!symmetric || e.col <= e.row) t.push_back(e);
    os << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general") << "\n";
    os << a.rows() << " " << a.cols() << " " << t.size() << "\n";
    char buf[64];
    for (const auto& e : t) {
        std::snprintf(buf, sizeof buf, "%.17g", e.value);
        os << e.row + 1 << " " << e.col + 1 << " " << buf << "\n";
    }
}

void write_matrix_market(const std::string& path, const SparseMatrix& a, MatrixMarketSymmetry sym) {
    std::ofstream os(path);
    SURFSTOKES_THROW_IF(!os, ErrorCode::Io, "cannot open '" + path + "' for writing");
    write_matrix_market(os, a, sym);
    SURFSTOKES_THROW_IF(!os, ErrorCode::Io, "write to '" + path + "' failed");
}

SparseMatrix read_matrix_market(std::istream& is) {
    std::string line;
    SURFSTOKES_THROW_IF(!std::getline(is, line), ErrorCode::Io, "empty MatrixMarket stream");
    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    SURFSTOKES_THROW_IF(tag != "%%MatrixMarket" || object != "matrix" || format != "coordinate" ||
                            field != "real" || (symmetry != "general" && symmetry != "symmetric"),
                        ErrorCode::Io, "unsupported MatrixMarket banner: " + line);
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '%') break;
    std::istringstream size(line);
    long rows = 0, cols = 0, nnz = 0;
    SURFSTOKES_THROW_IF(!(size >> rows >> cols >> nnz), ErrorCode::Io, "bad MatrixMarket size line");
    std::vector<Triplet> t;
    t.reserve(symmetry == "symmetric" ? 2 * nnz : nnz);
    for (long k = 0; k < nnz; ++k) {
        long i = 0, j = 0;
        double v = 0.0;
        SURFSTOKES_THROW_IF(!(is >> i >> j >> v), ErrorCode::Io, "truncated MatrixMarket data");
        SURFSTOKES_THROW_IF(i < 1 || j < 1 || i > rows || j > cols, ErrorCode::Io,
                            "MatrixMarket index out of range");
        t.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), v});
        if (symmetry == "symmetric" && i != j)
            t.push_back({static_cast<int>(j - 1), static_cast<int>(i - 1), v});
    }
    return SparseMatrix::from_triplets(static_cast<int>(rows), static_cast<int>(cols), t);
}

SparseMatrix read_matrix_market(const std::string& path) {
    std::ifstream is(path);
    SURFSTOKES_THROW_IF(!is, ErrorCode::Io, "cannot open '" + path + "'");
    return read_matrix_market(is);
}

}  // namespace surfstokes::linalg
