#include "surfstokes/linalg/ldlt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>

#include "surfstokes/errors.hpp"

namespace surfstokes::linalg {

namespace {

// Relative size below which a pivot counts as complete cancellation.
constexpr double kCancellation = 1e-11;

std::vector<int> amd_order(const SparseMatrix& a) {
    const int n = a.rows();
    std::vector<Eigen::Triplet<double, int>> t;
    t.reserve(a.nnz() + n);
    // Eigen's AMD expects a stored diagonal.
    for (int i = 0; i < n; ++i) t.emplace_back(i, i, 1.0);
    for (int i = 0; i < n; ++i)
        for (long k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
            t.emplace_back(i, a.col_idx()[k], 1.0);
    Eigen::SparseMatrix<double, Eigen::ColMajor, int> pattern(n, n);
    pattern.setFromTriplets(t.begin(), t.end());
    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm;
    Eigen::AMDOrdering<int> amd;
    amd(pattern, perm);
    return {perm.indices().data(), perm.indices().data() + n};
}

// Keeps the fill-reducing order of the positive unknowns and delays each
// constraint unknown (negative sign) until a positive partner is
// eliminated. Partners are distinct and chosen greedily by the scaled
// coupling |k_ij| / sqrt(k_jj), strongest first. Eliminating a constraint
// right after its partner acts like a 2x2 pivot [a b; b 0]; a constraint
// eliminated before any partner, or sharing one, would pivot on the tiny
// regularization alone.
std::vector<int> delay_constraints(const SparseMatrix& a, const std::vector<int>& order,
                                   const std::vector<signed char>& signs) {
    const int n = a.rows();
    struct Candidate {
        double weight;
        int constraint;
        int partner;
    };
    std::vector<Candidate> cand;
    for (int i = 0; i < n; ++i) {
        if (signs[i] >= 0) continue;
        for (long k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
            const int j = a.col_idx()[k];
            const double ajj = a.coeff(j, j);
            if (signs[j] > 0 && a.values()[k] != 0.0 && ajj > 0.0)
                cand.push_back({std::abs(a.values()[k]) / std::sqrt(ajj), i, j});
        }
    }
    std::stable_sort(cand.begin(), cand.end(),
                     [](const Candidate& x, const Candidate& y) { return x.weight > y.weight; });
    std::vector<int> partner(n, -1);
    std::vector<char> taken(n, 0);
    for (const Candidate& c : cand) {
        if (partner[c.constraint] >= 0 || taken[c.partner]) continue;
        partner[c.constraint] = c.partner;
        taken[c.partner] = 1;
    }

    std::vector<char> placed(n, 0);
    std::vector<int> waiting(n, -1);  // partner -> constraint
    std::vector<int> out;
    out.reserve(n);
    for (const int v : order) {
        if (signs[v] < 0 && partner[v] >= 0 && !placed[partner[v]]) {
            waiting[partner[v]] = v;
            continue;
        }
        out.push_back(v);
        placed[v] = 1;
        if (waiting[v] >= 0) {
            out.push_back(waiting[v]);
            placed[waiting[v]] = 1;
        }
    }
    return out;
}

}  // namespace

LdltFactor::LdltFactor(const SparseMatrix& matrix, FactorOptions options)
    : matrix_(&matrix), options_(std::move(options)), n_(matrix.rows()) {
    SURFSTOKES_THROW_IF(matrix.rows() != matrix.cols(), ErrorCode::Internal,
                        "LDL^T requires a square matrix");
    SURFSTOKES_THROW_IF(!options_.signs.empty() && static_cast<int>(options_.signs.size()) != n_,
                        ErrorCode::Internal, "sign hint size mismatch");
    perm_ = n_ > 0 ? amd_order(matrix) : std::vector<int>{};
    if (!options_.signs.empty()) perm_ = delay_constraints(matrix, perm_, options_.signs);

    // Constraint unknowns that still meet a tiny pivot are moved behind all
    // others and the factorization is repeated. Once every other unknown is
    // eliminated their pivots form the Schur complement of the constraint
    // block, which is definite for a nonsingular saddle matrix.
    for (int attempt = 0;; ++attempt) {
        const std::vector<int> tiny = factorize();
        if (tiny.empty() || attempt == kMaxReorderings) break;
        std::vector<char> late(n_, 0);
        for (const int i : tiny) late[i] = 1;
        std::vector<int> order;
        order.reserve(n_);
        for (const int i : perm_)
            if (!late[i]) order.push_back(i);
        for (const int i : perm_)
            if (late[i]) order.push_back(i);
        if (order == perm_) break;
        perm_ = std::move(order);
    }
}

std::vector<int> LdltFactor::factorize() {
    const int n = n_;
    const SparseMatrix& matrix = *matrix_;
    const auto& rp = matrix.row_ptr();
    const auto& ci = matrix.col_idx();
    const auto& va = matrix.values();
    inertia_ = {};
    std::vector<int> tiny;
    pinv_.assign(n, 0);
    for (int k = 0; k < n; ++k) pinv_[perm_[k]] = k;

    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(matrix.coeff(i, i)));
    if (max_diag == 0.0) max_diag = 1.0;
    const double shift = options_.signs.empty() ? 0.0 : options_.regularization * max_diag;
    const double zero_tol = options_.singular_threshold * max_diag;

    // Symbolic: elimination tree and column counts.
    std::vector<int> parent(n, -1);
    std::vector<int> flag(n, -1);
    std::vector<long> lnz(n, 0);
    for (int k = 0; k < n; ++k) {
        flag[k] = k;
        const int kk = perm_[k];
        for (long p = rp[kk]; p < rp[kk + 1]; ++p) {
            int i = pinv_[ci[p]];
            if (i >= k) continue;
            for (; flag[i] != k; i = parent[i]) {
                if (parent[i] == -1) parent[i] = k;
                ++lnz[i];
                flag[i] = k;
            }
        }
    }
    lp_.assign(n + 1, 0);
    for (int k = 0; k < n; ++k) lp_[k + 1] = lp_[k] + lnz[k];
    li_.assign(lp_[n], 0);
    lx_.assign(lp_[n], 0.0);
    d_.resize(n);

    // Numeric.
    std::vector<double> y(n, 0.0);
    std::vector<int> pattern(n, 0);
    std::fill(lnz.begin(), lnz.end(), 0);
    for (int k = 0; k < n; ++k) {
        int top = n;
        flag[k] = k;
        const int kk = perm_[k];
        for (long p = rp[kk]; p < rp[kk + 1]; ++p) {
            int i = pinv_[ci[p]];
            if (i > k) continue;
            y[i] += va[p];
            int len = 0;
            for (; flag[i] != k; i = parent[i]) {
                pattern[len++] = i;
                flag[i] = k;
            }
            while (len > 0) pattern[--top] = pattern[--len];
        }
        double dk = y[k];
        double scale = std::abs(dk);  // sum of the magnitudes forming the pivot
        y[k] = 0.0;
        for (; top < n; ++top) {
            const int i = pattern[top];
            const double yi = y[i];
            y[i] = 0.0;
            const long p2 = lp_[i] + lnz[i];
            for (long p = lp_[i]; p < p2; ++p) y[li_[p]] -= lx_[p] * yi;
            const double l = yi / d_[i];
            dk -= l * yi;
            scale += std::abs(l * yi);
            li_[p2] = k;
            lx_[p2] = l;
            ++lnz[i];
        }
        // A pivot is zero when it is negligible against the diagonal scale
        // or cancels to rounding level against the terms it was formed from.
        const bool zero = std::abs(dk) <= zero_tol || std::abs(dk) <= kCancellation * scale;
        if (!options_.signs.empty()) dk += options_.signs[kk] * shift;
        if (zero) {
            ++inertia_.zero;
            if (!options_.signs.empty() && options_.signs[kk] < 0) tiny.push_back(kk);
            double s = dk < 0.0 ? -1.0 : 1.0;
            if (!options_.signs.empty()) s = options_.signs[kk] < 0 ? -1.0 : 1.0;
            dk = s * std::max(zero_tol, shift);
        } else if (dk > 0.0) {
            ++inertia_.positive;
        } else {
            ++inertia_.negative;
        }
        d_[k] = dk;
    }
    return tiny;
}

Eigen::VectorXd LdltFactor::apply_inverse(const Eigen::VectorXd& b) const {
    const int n = n_;
    Eigen::VectorXd x(n);
    for (int k = 0; k < n; ++k) x[k] = b[perm_[k]];
    for (int j = 0; j < n; ++j) {
        const double xj = x[j];
        for (long p = lp_[j]; p < lp_[j + 1]; ++p) x[li_[p]] -= lx_[p] * xj;
    }
    for (int j = 0; j < n; ++j) x[j] /= d_[j];
    for (int j = n - 1; j >= 0; --j) {
        double s = x[j];
        for (long p = lp_[j]; p < lp_[j + 1]; ++p) s -= lx_[p] * x[li_[p]];
        x[j] = s;
    }
    Eigen::VectorXd out(n);
    for (int k = 0; k < n; ++k) out[perm_[k]] = x[k];
    return out;
}

Eigen::VectorXd LdltFactor::solve(const Eigen::VectorXd& b, SolveReport* report) const {
    SURFSTOKES_THROW_IF(b.size() != n_, ErrorCode::Internal, "right-hand side size mismatch");
    SURFSTOKES_THROW_IF(inertia_.zero > 0, ErrorCode::SingularMatrix,
                        std::to_string(inertia_.zero) + " zero pivot(s) in LDL^T factorization");
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        if (report != nullptr) *report = {};
        return Eigen::VectorXd::Zero(n_);
    }
    Eigen::VectorXd x = apply_inverse(b);
    Eigen::VectorXd r = b - matrix_->multiply(x);
    double rel = r.norm() / bnorm;
    int steps = 0;
    while (steps < options_.max_refinement_steps && rel > 1e-15) {
        const Eigen::VectorXd xn = x + apply_inverse(r);
        const Eigen::VectorXd rn = b - matrix_->multiply(xn);
        const double reln = rn.norm() / bnorm;
        ++steps;
        if (!(reln < rel)) break;
        const bool slow = reln > 0.5 * rel;
        x = xn;
        r = rn;
        rel = reln;
        if (slow && rel <= options_.target_residual) break;
    }
    if (report != nullptr) *report = {rel, steps};
    SURFSTOKES_THROW_IF(!(rel <= options_.target_residual), ErrorCode::SingularMatrix,
                        "solve stalled at relative residual " + std::to_string(rel));
    return x;
}

Eigen::VectorXd factor_and_solve(const SparseMatrix& matrix, const Eigen::VectorXd& b,
                                 const FactorOptions& options, Inertia* inertia,
                                 SolveReport* report) {
    const LdltFactor f(matrix, options);
    if (inertia != nullptr) *inertia = f.inertia();
    return f.solve(b, report);
}

}  // namespace surfstokes::linalg
