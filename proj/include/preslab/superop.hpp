#pragma once

#include <vector>

#include "preslab/matrix.hpp"

namespace preslab {

/// A linear map on M_n(C) as an n^2 x n^2 matrix acting on column-stacked
/// vectorizations: vec(Phi(T)) = mat * vec(T).
struct SuperOp {
    int n = 0;
    CMatrix mat;

    CMatrix apply(const CMatrix& t) const;
};

/// Column-stacking vectorization: vec(T)[i + j*n] = T(i, j).
CMatrix vec(const CMatrix& t);
CMatrix unvec(const CMatrix& v, int rows, int cols);

SuperOp identity_superop(int n);

/// Commutation matrix K_n with vec(T^t) = K_n vec(T).
CMatrix commutation_matrix(int n);

/// The transpose map T -> T^t as a superoperator.
SuperOp transpose_superop(int n);

/// T -> alpha U T U^{-1}; superoperator matrix alpha * ((U^{-1})^t kron U).
SuperOp conjugation_map(cplx alpha, const CMatrix& u, const Tolerances& tol);

/// T -> alpha D U T^t U^{-1}.
SuperOp transpose_conjugation_map(cplx alpha, const CMatrix& d, const CMatrix& u,
                                  const Tolerances& tol);

/// D solving alpha^2 U C^t U^{-1} = D^{-1}; with this D the transpose
/// conjugation family preserves products at C with target D.
CMatrix solve_transpose_constraint(cplx alpha, const CMatrix& u, const CMatrix& c,
                                   const Tolerances& tol);

SuperOp compose(const SuperOp& phi, const SuperOp& psi);
SuperOp invert_superop(const SuperOp& phi, const Tolerances& tol);
bool is_bijective(const SuperOp& phi, const Tolerances& tol);
int kernel_dim(const SuperOp& phi, const Tolerances& tol);

/// T -> z_inv * Phi(T).
SuperOp scale_left(const SuperOp& phi, const CMatrix& z_inv);

/// Generic bijective map: Ginibre n^2 x n^2 superoperator matrix.
SuperOp sample_superop(int n, Rng& rng);

enum class Side { Left, Right };

/// Basis of ann_l(c) = {X : Xc = 0} or ann_r(c) = {X : cX = 0};
/// dimension n * (n - rank(c)).
struct AnnihilatorBasis {
    Side side = Side::Left;
    CMatrix c;
    std::vector<CMatrix> basis;
};

AnnihilatorBasis annihilator_basis(const CMatrix& c, Side side, const Tolerances& tol);

}  // namespace preslab
