#include "preslab/zp_factory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace preslab {

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::Direct: return "Direct";
        case Strategy::SplitP: return "SplitP";
        case Strategy::SplitQ: return "SplitQ";
        case Strategy::SplitBoth: return "SplitBoth";
    }
    return "?";
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "Direct") return Strategy::Direct;
    if (s == "SplitP") return Strategy::SplitP;
    if (s == "SplitQ") return Strategy::SplitQ;
    if (s == "SplitBoth") return Strategy::SplitBoth;
    throw std::invalid_argument("unknown strategy: " + s);
}

std::pair<CMatrix, CMatrix> sample_zero_product_pair(int n, int r, Rng& rng,
                                                     const Tolerances& tol) {
    if (r < 1 || r > n - 1) {
        throw DimensionMismatch("sample_zero_product_pair: need 1 <= r <= n-1");
    }
    const CMatrix q = sample_ginibre(n, r, rng) * sample_ginibre(r, n, rng);
    const CMatrix kern = CMatrix::from_columns(nullspace_basis(q, tol));
    const CMatrix p = kern * sample_ginibre(kern.cols(), n, rng);
    if (p.frobenius_norm() == 0.0) {
        throw NumericalFailure("sample_zero_product_pair: degenerate P");
    }
    return {q, p};
}

namespace {

// Greedy complement selection: kernel vectors of q that extend a basis of
// im(p), via incremental modified Gram-Schmidt.
std::vector<std::vector<cplx>> select_complement(
    const std::vector<std::vector<cplx>>& kernel, const CMatrix& im_p_orth, int k,
    const Tolerances& tol) {
    std::vector<std::vector<cplx>> ortho;  // orthonormal spanning set so far
    for (int j = 0; j < im_p_orth.cols(); ++j) ortho.push_back(im_p_orth.col_vec(j));

    std::vector<std::vector<cplx>> selected;
    for (const auto& kv : kernel) {
        if (static_cast<int>(selected.size()) == k) break;
        std::vector<cplx> v = kv;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& u : ortho) {
                cplx proj(0.0, 0.0);
                for (std::size_t i = 0; i < u.size(); ++i) proj += std::conj(u[i]) * v[i];
                for (std::size_t i = 0; i < u.size(); ++i) v[i] -= proj * u[i];
            }
        }
        const double nrm = vec_norm(v);
        if (nrm <= tol.rank_eps * std::max(1.0, vec_norm(kv))) continue;  // dependent
        for (auto& x : v) x /= nrm;
        ortho.push_back(std::move(v));
        selected.push_back(kv);
    }
    return selected;
}

// Pieces U_chunk U_chunk^H m for an orthonormal basis U of im(m), chunks of
// size <= cap. The pieces sum back to m and each has rank <= cap.
std::vector<CMatrix> split_by_image(const CMatrix& m, int cap, const Tolerances& tol) {
    const CMatrix u = orthonormal_columns(image_basis(m, tol), tol);
    const int r = u.cols();
    std::vector<CMatrix> pieces;
    for (int start = 0; start < r; start += cap) {
        const int width = std::min(cap, r - start);
        CMatrix uc(u.rows(), width);
        for (int j = 0; j < width; ++j) uc.set_col(j, u.col_vec(start + j));
        pieces.push_back(uc * (uc.adjoint() * m));
    }
    return pieces;
}

double pair_scale(double a, double b) { return (a > 0.0 && b > 0.0) ? a * b : 1.0; }

}  // namespace

WitnessTriple construct_direct(const CMatrix& q, const CMatrix& p,
                               const RankFactorization& c_fact, const Tolerances& tol) {
    if (!q.is_square() || !p.is_square() || q.rows() != p.rows()) {
        throw DimensionMismatch("construct_direct: Q, P must be square of equal size");
    }
    const int n = q.rows();
    const int k = c_fact.k;

    const auto kernel = nullspace_basis(q, tol);
    const CMatrix im_p = orthonormal_columns(image_basis(p, tol), tol);
    const int rank_p = im_p.cols();
    if (static_cast<int>(kernel.size()) - rank_p < k) {
        throw InfeasibleDimension("construct_direct: dim ker(Q) - rank(P) < k");
    }

    const auto ws = select_complement(kernel, im_p, k, tol);
    if (static_cast<int>(ws.size()) < k) {
        throw NumericalFailure("construct_direct: could not extend im(P) basis inside ker(Q)");
    }
    const CMatrix w = CMatrix::from_columns(ws);  // n x k

    // Functionals g_i: minimum-norm solution of g_i(w_j) = delta_ij,
    // g_i(im P) = 0. With S = [W | im_p], g_i = conj(S) y_i where
    // (S^t conj(S)) y_i = e_i.
    CMatrix s(n, k + rank_p);
    for (int j = 0; j < k; ++j) s.set_col(j, w.col_vec(j));
    for (int j = 0; j < rank_p; ++j) s.set_col(k + j, im_p.col_vec(j));
    const CMatrix gram = s.transpose() * s.conjugate();
    if (!is_invertible(gram, tol)) {
        throw NumericalFailure("construct_direct: functional system ill-conditioned");
    }
    CMatrix rhs(k + rank_p, k);
    for (int j = 0; j < k; ++j) rhs(j, j) = 1.0;
    const CMatrix g = s.conjugate() * solve(gram, rhs, tol);  // columns g_i

    const CMatrix v = CMatrix::from_columns(c_fact.vs);  // n x k
    CMatrix f(k, n);                                     // rows f_i
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < n; ++j) f(i, j) = c_fact.fs[i][j];
    }

    WitnessTriple wt;
    wt.q_piece = q;
    wt.p_piece = p;
    wt.a = v * g.transpose();
    wt.b = w * f;

    const CMatrix c = c_fact.reconstruct();
    wt.residuals.ab_minus_c = rel_residual(wt.a * wt.b - c, c.frobenius_norm());
    wt.residuals.ap = (wt.a * p).frobenius_norm() /
                      pair_scale(wt.a.frobenius_norm(), p.frobenius_norm());
    wt.residuals.qb = (q * wt.b).frobenius_norm() /
                      pair_scale(q.frobenius_norm(), wt.b.frobenius_norm());
    return wt;
}

FactorizationCertificate construct_certificate(const CMatrix& q, const CMatrix& p,
                                               const CMatrix& c, const Tolerances& tol) {
    if (!q.is_square() || !p.is_square() || !c.is_square() || q.rows() != p.rows() ||
        q.rows() != c.rows()) {
        throw DimensionMismatch("construct_certificate: Q, P, C must be square of equal size");
    }
    if (q.frobenius_norm() == 0.0 || p.frobenius_norm() == 0.0) {
        throw ZeroMatrixError("construct_certificate: Q and P must be nonzero");
    }
    const double qp_rel = (q * p).frobenius_norm() /
                          pair_scale(q.frobenius_norm(), p.frobenius_norm());
    if (qp_rel > tol.check_tol) {
        throw std::invalid_argument("construct_certificate: QP != 0");
    }

    const RankFactorization c_fact = rank_factorize(c, tol);  // throws on C = 0
    const int n = q.rows();
    const int k = c_fact.k;
    const int rq = rank(q, tol);
    const int rp = rank(p, tol);
    const int dim_ker_q = n - rq;

    FactorizationCertificate cert;
    cert.q = q;
    cert.p = p;
    cert.c = c;

    if (dim_ker_q - rp >= k) {
        cert.strategy = Strategy::Direct;
        cert.q_pieces = {q};
        cert.p_pieces = {p};
    } else if (dim_ker_q - k >= 1) {
        cert.strategy = Strategy::SplitP;
        cert.q_pieces = {q};
        cert.p_pieces = split_by_image(p, dim_ker_q - k, tol);
    } else if (n - 1 - rp >= k) {
        cert.strategy = Strategy::SplitQ;
        cert.q_pieces = split_by_image(q, n - k - rp, tol);
        cert.p_pieces = {p};
    } else if (n >= k + 2) {
        cert.strategy = Strategy::SplitBoth;
        cert.q_pieces = split_by_image(q, n - k - 1, tol);
        cert.p_pieces = split_by_image(p, 1, tol);
    } else {
        throw InfeasibleDimension("construct_certificate: n < k + 2 and Direct infeasible");
    }

    for (const auto& qp_piece : cert.q_pieces) {
        for (const auto& pp_piece : cert.p_pieces) {
            cert.witnesses.push_back(construct_direct(qp_piece, pp_piece, c_fact, tol));
        }
    }
    return cert;
}

FourEquationCheck verify_four_equations(const WitnessTriple& w, const CMatrix& c,
                                        const Tolerances& tol) {
    const double scale = c.frobenius_norm();
    FourEquationCheck chk;
    chk.ab = rel_residual(w.a * w.b - c, scale);
    chk.aqb = rel_residual((w.a + w.q_piece) * w.b - c, scale);
    chk.apb = rel_residual(w.a * (w.p_piece + w.b) - c, scale);
    chk.aqpb = rel_residual((w.a + w.q_piece) * (w.p_piece + w.b) - c, scale);
    chk.pass = chk.ab <= tol.check_tol && chk.aqb <= tol.check_tol &&
               chk.apb <= tol.check_tol && chk.aqpb <= tol.check_tol;
    return chk;
}

VerificationReport derive_zero_product(const SuperOp& phi,
                                       const FactorizationCertificate& cert,
                                       const CMatrix& d, const Tolerances& tol) {
    VerificationReport rep;
    rep.name = "derive_zero_product";
    rep.n = phi.n;
    rep.samples = static_cast<int>(cert.witnesses.size());

    const double d_scale = d.frobenius_norm();
    const int np = static_cast<int>(cert.p_pieces.size());

    std::vector<CMatrix> fq, fp;
    for (const auto& m : cert.q_pieces) fq.push_back(phi.apply(m));
    for (const auto& m : cert.p_pieces) fp.push_back(phi.apply(m));

    for (std::size_t idx = 0; idx < cert.witnesses.size(); ++idx) {
        const auto& w = cert.witnesses[idx];
        const CMatrix fa = phi.apply(w.a);
        const CMatrix fb = phi.apply(w.b);
        const CMatrix& q_img = fq[idx / np];
        const CMatrix& p_img = fp[idx % np];
        const std::string tag = "pair " + std::to_string(idx);

        rep.add_detail(tag + ": phi(A)phi(B)=D", rel_residual(fa * fb - d, d_scale));
        rep.add_detail(tag + ": phi(A+q)phi(B)=D",
                       rel_residual((fa + q_img) * fb - d, d_scale));
        rep.add_detail(tag + ": phi(A)phi(p+B)=D",
                       rel_residual(fa * (p_img + fb) - d, d_scale));
        rep.add_detail(tag + ": phi(A+q)phi(p+B)=D",
                       rel_residual((fa + q_img) * (p_img + fb) - d, d_scale));
        rep.add_detail(tag + ": phi(q)phi(p)=0",
                       (q_img * p_img).frobenius_norm() /
                           pair_scale(q_img.frobenius_norm(), p_img.frobenius_norm()));
    }

    const CMatrix fq_total = phi.apply(cert.q);
    const CMatrix fp_total = phi.apply(cert.p);
    rep.add_detail("phi(Q)phi(P)=0",
                   (fq_total * fp_total).frobenius_norm() /
                       pair_scale(fq_total.frobenius_norm(), fp_total.frobenius_norm()));

    rep.finalize(tol.check_tol);
    return rep;
}

}  // namespace preslab
