#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "preslab/errors.hpp"
#include "preslab/rng.hpp"

namespace preslab {

using cplx = std::complex<double>;

/// Relative thresholds used by every rank / invertibility / residual decision.
struct Tolerances {
    double pivot_eps = 1e-10;  ///< invertibility pivot cutoff
    double rank_eps = 1e-8;    ///< pivot cutoff for rank decisions
    double check_tol = 1e-9;   ///< residual acceptance

    /// All fields must lie in (0, 1).
    void validate() const;
};

/// Dense n x m complex matrix, row-major.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(int rows, int cols);

    static CMatrix identity(int n);
    static CMatrix zero(int rows, int cols) { return CMatrix(rows, cols); }
    /// Matrix unit E_ij in M_n.
    static CMatrix unit(int n, int i, int j);
    static CMatrix column(const std::vector<cplx>& v);
    static CMatrix diagonal(const std::vector<cplx>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * cols_ + j];
    }

    CMatrix operator+(const CMatrix& o) const;
    CMatrix operator-(const CMatrix& o) const;
    CMatrix operator-() const;
    CMatrix operator*(const CMatrix& o) const;
    friend CMatrix operator*(cplx s, const CMatrix& m);

    CMatrix transpose() const;
    CMatrix conjugate() const;
    /// Conjugate transpose.
    CMatrix adjoint() const;

    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;
    bool is_square() const { return rows_ == cols_; }

    std::vector<cplx> col_vec(int j) const;
    std::vector<cplx> row_vec(int i) const;
    void set_col(int j, const std::vector<cplx>& v);

    /// Horizontal concatenation of column vectors.
    static CMatrix from_columns(const std::vector<std::vector<cplx>>& cols);

    bool operator==(const CMatrix& o) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> a_;
};

// ---- vector helpers (vectors are std::vector<cplx>) ----

/// Bilinear pairing f(y) = sum_i f_i y_i (no conjugation; functionals are
/// coordinate vectors of the dual basis).
cplx bilinear_dot(const std::vector<cplx>& f, const std::vector<cplx>& y);

/// Outer product x f^T, the matrix of the rank-one operator x (x) f.
CMatrix outer(const std::vector<cplx>& x, const std::vector<cplx>& f);

double vec_norm(const std::vector<cplx>& v);

// ---- factorizations and tolerance-driven decisions ----

struct LuResult {
    CMatrix lower;                 ///< unit lower triangular
    CMatrix upper;
    std::vector<int> permutation;  ///< row i of P*M is row permutation[i] of M
    double min_abs_pivot = 0.0;

    CMatrix permutation_matrix() const;
};

/// LU with partial pivoting: P*M = L*U.
LuResult lu_decompose(const CMatrix& m);

bool is_invertible(const CMatrix& m, const Tolerances& tol);

CMatrix inverse(const CMatrix& m, const Tolerances& tol);

/// Solve A X = B for square A.
CMatrix solve(const CMatrix& a, const CMatrix& b, const Tolerances& tol);

/// Row echelon data from Gaussian elimination with partial pivoting and a
/// relative pivot threshold. rref is fully reduced (unit pivots, zeros above).
struct Echelon {
    CMatrix rref;
    std::vector<int> pivot_cols;
};

Echelon reduced_row_echelon(const CMatrix& m, const Tolerances& tol);

int rank(const CMatrix& m, const Tolerances& tol);

/// Basis of ker(M) as column vectors; size = cols - rank.
std::vector<std::vector<cplx>> nullspace_basis(const CMatrix& m, const Tolerances& tol);

/// Columns of m spanning its column space (the pivot columns), verbatim.
CMatrix image_basis(const CMatrix& m, const Tolerances& tol);

/// Orthonormalize the columns of m (modified Gram-Schmidt, Hermitian inner
/// product), dropping dependent columns.
CMatrix orthonormal_columns(const CMatrix& m, const Tolerances& tol);

/// Nonzero lambda with I - lambda*x invertible. Tries lambda = 1/j for
/// j = 1..n+1 first (at most n can fail), then seeded random fallbacks.
cplx find_regular_scalar(const CMatrix& x, const Tolerances& tol);

CMatrix sample_ginibre(int rows, int cols, Rng& rng);
CMatrix sample_ginibre(int n, Rng& rng);
CMatrix sample_invertible(int n, Rng& rng, const Tolerances& tol);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// ||delta||_F / max(1, scale).
double rel_residual(const CMatrix& delta, double scale);

}  // namespace preslab
