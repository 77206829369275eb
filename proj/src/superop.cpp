#include "preslab/superop.hpp"

namespace preslab {

CMatrix SuperOp::apply(const CMatrix& t) const {
    if (t.rows() != n || t.cols() != n) throw DimensionMismatch("SuperOp::apply");
    return unvec(mat * vec(t), n, n);
}

CMatrix vec(const CMatrix& t) {
    CMatrix v(t.rows() * t.cols(), 1);
    for (int j = 0; j < t.cols(); ++j)
        for (int i = 0; i < t.rows(); ++i) v(i + j * t.rows(), 0) = t(i, j);
    return v;
}

CMatrix unvec(const CMatrix& v, int rows, int cols) {
    if (v.rows() != rows * cols || v.cols() != 1) throw DimensionMismatch("unvec");
    CMatrix t(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) t(i, j) = v(i + j * rows, 0);
    return t;
}

SuperOp identity_superop(int n) { return SuperOp{n, CMatrix::identity(n * n)}; }

CMatrix commutation_matrix(int n) {
    CMatrix k(n * n, n * n);
    // vec(T^t)[i + j*n] = T(j, i) = vec(T)[j + i*n]
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) k(i + j * n, j + i * n) = 1.0;
    return k;
}

SuperOp transpose_superop(int n) { return SuperOp{n, commutation_matrix(n)}; }

SuperOp conjugation_map(cplx alpha, const CMatrix& u, const Tolerances& tol) {
    if (alpha == cplx(0.0, 0.0)) throw std::invalid_argument("conjugation_map: alpha = 0");
    const CMatrix u_inv = inverse(u, tol);  // throws SingularMatrix
    // vec(U T U^{-1}) = ((U^{-1})^t kron U) vec(T)
    return SuperOp{u.rows(), alpha * kron(u_inv.transpose(), u)};
}

SuperOp transpose_conjugation_map(cplx alpha, const CMatrix& d, const CMatrix& u,
                                  const Tolerances& tol) {
    if (alpha == cplx(0.0, 0.0)) {
        throw std::invalid_argument("transpose_conjugation_map: alpha = 0");
    }
    if (!is_invertible(d, tol)) throw SingularMatrix("transpose_conjugation_map: D singular");
    const CMatrix u_inv = inverse(u, tol);
    const int n = u.rows();
    // T -> alpha (DU) T^t U^{-1}
    return SuperOp{n, alpha * (kron(u_inv.transpose(), d * u) * commutation_matrix(n))};
}

CMatrix solve_transpose_constraint(cplx alpha, const CMatrix& u, const CMatrix& c,
                                   const Tolerances& tol) {
    if (alpha == cplx(0.0, 0.0)) {
        throw std::invalid_argument("solve_transpose_constraint: alpha = 0");
    }
    if (!is_invertible(c, tol)) throw SingularMatrix("solve_transpose_constraint: C singular");
    const CMatrix d_inv = (alpha * alpha) * (u * c.transpose() * inverse(u, tol));
    return inverse(d_inv, tol);
}

SuperOp compose(const SuperOp& phi, const SuperOp& psi) {
    if (phi.n != psi.n) throw DimensionMismatch("compose: superoperator size mismatch");
    return SuperOp{phi.n, phi.mat * psi.mat};
}

SuperOp invert_superop(const SuperOp& phi, const Tolerances& tol) {
    return SuperOp{phi.n, inverse(phi.mat, tol)};
}

bool is_bijective(const SuperOp& phi, const Tolerances& tol) {
    return is_invertible(phi.mat, tol);
}

int kernel_dim(const SuperOp& phi, const Tolerances& tol) {
    return phi.n * phi.n - rank(phi.mat, tol);
}

SuperOp scale_left(const SuperOp& phi, const CMatrix& z_inv) {
    if (z_inv.rows() != phi.n || z_inv.cols() != phi.n) {
        throw DimensionMismatch("scale_left: z_inv size mismatch");
    }
    // vec(z_inv * X) = (I kron z_inv) vec(X)
    return SuperOp{phi.n, kron(CMatrix::identity(phi.n), z_inv) * phi.mat};
}

SuperOp sample_superop(int n, Rng& rng) { return SuperOp{n, sample_ginibre(n * n, rng)}; }

AnnihilatorBasis annihilator_basis(const CMatrix& c, Side side, const Tolerances& tol) {
    if (!c.is_square()) throw DimensionMismatch("annihilator_basis: c not square");
    const int n = c.rows();
    // Left: vec(Xc) = (c^t kron I) vec(X); Right: vec(cX) = (I kron c) vec(X).
    const CMatrix mult = side == Side::Left ? kron(c.transpose(), CMatrix::identity(n))
                                            : kron(CMatrix::identity(n), c);
    AnnihilatorBasis ann;
    ann.side = side;
    ann.c = c;
    for (const auto& v : nullspace_basis(mult, tol)) {
        ann.basis.push_back(unvec(CMatrix::column(v), n, n));
    }
    return ann;
}

}  // namespace preslab
