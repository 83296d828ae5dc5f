#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace surfstokes::linalg {

struct Triplet {
    int row;
    int col;
    double value;
};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within a row.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

    /// Structure from per-row column lists (sorted and deduplicated here);
    /// values start at zero.
    static SparseMatrix from_pattern(int rows, int cols, std::vector<std::vector<int>> pattern);
    /// Duplicates are summed in the order given.
    static SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& triplets);
    static SparseMatrix identity(int n);
    static SparseMatrix from_dense(const Eigen::MatrixXd& dense, double drop = 0.0);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    long nnz() const { return static_cast<long>(col_idx_.size()); }

    const std::vector<long>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// Position of (i, j) in the value array, or -1 if not stored.
    long find(int i, int j) const;
    /// Stored entry or zero.
    double coeff(int i, int j) const;
    /// Adds to a stored entry; throws Internal if (i, j) is not in the pattern.
    void add(int i, int j, double v);

    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
    /// y += a * A x
    void multiply_add(const Eigen::VectorXd& x, Eigen::VectorXd& y, double a = 1.0) const;
    Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& x) const;
    SparseMatrix transpose() const;
    /// Removes stored entries with |value| <= tol (exact zeros by default).
    void prune(double tol = 0.0);
    Eigen::MatrixXd to_dense() const;
    std::vector<Triplet> triplets() const;
    /// Largest |A(i,j) - A(j,i)|.
    double asymmetry() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<long> row_ptr_{0};
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

/// One block of a block matrix, placed at the given offsets, optionally
/// transposed. Blocks with zero rows are skipped.
struct BlockEntry {
    const SparseMatrix* matrix;
    int row_offset;
    int col_offset;
    bool transposed = false;
};
SparseMatrix assemble_blocks(int rows, int cols, const std::vector<BlockEntry>& blocks,
                             const std::vector<Triplet>& extra = {});

enum class MatrixMarketSymmetry { General, Symmetric };

/// Coordinate real format, 1-based. Symmetric writes the lower triangle.
void write_matrix_market(std::ostream& os, const SparseMatrix& a, MatrixMarketSymmetry sym);
void write_matrix_market(const std::string& path, const SparseMatrix& a, MatrixMarketSymmetry sym);
SparseMatrix read_matrix_market(std::istream& is);
SparseMatrix read_matrix_market(const std::string& path);

}  // namespace surfstokes::linalg
