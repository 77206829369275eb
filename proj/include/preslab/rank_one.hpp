#pragma once

#include <vector>

#include "preslab/matrix.hpp"

namespace preslab {

/// The rank-one operator x (x) f acting by y -> f(y) x, with f a functional
/// given as the coordinate vector of a bilinear pairing.
struct RankOneOp {
    std::vector<cplx> x;
    std::vector<cplx> f;

    CMatrix matrix() const { return outer(x, f); }
};

std::vector<cplx> apply_rank_one(const RankOneOp& op, const std::vector<cplx>& y);

/// (x (x) f) o (y (x) g) = f(y) * (x (x) g). coeff = f(y); the zero outcome
/// (f(y) = 0) is signaled by vanishes.
struct RankOneProduct {
    cplx coeff;
    RankOneOp op;
    bool vanishes;
};

RankOneProduct compose_rank_one(const RankOneOp& a, const RankOneOp& b);

/// True iff |f(x) - 1| <= check_tol.
bool is_projection(const RankOneOp& op, const Tolerances& tol);

/// C = sum_i v_i (x) f_i with both families linearly independent.
struct RankFactorization {
    int k = 0;
    std::vector<std::vector<cplx>> vs;
    std::vector<std::vector<cplx>> fs;

    CMatrix reconstruct() const;
};

/// Column-pivoted row reduction: v_i are the pivot columns of C kept verbatim,
/// f_i the matching rows of rref(C). Throws ZeroMatrixError on C = 0.
RankFactorization rank_factorize(const CMatrix& c, const Tolerances& tol);

}  // namespace preslab
