#include "preslab/rank_one.hpp"

#include <cmath>

namespace preslab {

std::vector<cplx> apply_rank_one(const RankOneOp& op, const std::vector<cplx>& y) {
    const cplx fy = bilinear_dot(op.f, y);
    std::vector<cplx> r(op.x.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = fy * op.x[i];
    return r;
}

RankOneProduct compose_rank_one(const RankOneOp& a, const RankOneOp& b) {
    const cplx fy = bilinear_dot(a.f, b.x);
    return RankOneProduct{fy, RankOneOp{a.x, b.f}, fy == cplx(0.0, 0.0)};
}

bool is_projection(const RankOneOp& op, const Tolerances& tol) {
    if (op.x.size() != op.f.size()) throw DimensionMismatch("is_projection");
    return std::abs(bilinear_dot(op.f, op.x) - cplx(1.0, 0.0)) <= tol.check_tol;
}

CMatrix RankFactorization::reconstruct() const {
    if (k == 0) return CMatrix();
    CMatrix c = outer(vs[0], fs[0]);
    for (int i = 1; i < k; ++i) c = c + outer(vs[i], fs[i]);
    return c;
}

RankFactorization rank_factorize(const CMatrix& c, const Tolerances& tol) {
    const Echelon ech = reduced_row_echelon(c, tol);
    const int k = static_cast<int>(ech.pivot_cols.size());
    if (k == 0) {
        throw ZeroMatrixError("rank_factorize: zero matrix has no rank factorization");
    }
    RankFactorization fact;
    fact.k = k;
    for (int i = 0; i < k; ++i) {
        fact.vs.push_back(c.col_vec(ech.pivot_cols[i]));
        fact.fs.push_back(ech.rref.row_vec(i));
    }
    return fact;
}

}  // namespace preslab
