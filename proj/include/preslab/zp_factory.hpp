#pragma once

#include <utility>
#include <vector>

#include "preslab/matrix.hpp"
#include "preslab/rank_one.hpp"
#include "preslab/report.hpp"
#include "preslab/superop.hpp"

namespace preslab {

/// One (q_piece, p_piece) pair together with a factorization C = A*B
/// satisfying A*p_piece = 0 and q_piece*B = 0.
struct WitnessTriple {
    CMatrix q_piece;
    CMatrix p_piece;
    CMatrix a;
    CMatrix b;

    struct Residuals {
        double ab_minus_c = 0.0;
        double ap = 0.0;
        double qb = 0.0;
    } residuals;
};

enum class Strategy { Direct, SplitP, SplitQ, SplitBoth };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

/// Full witness package: piece decompositions of Q and P plus one witness per
/// (q_piece, p_piece) pair, witnesses in row-major pair order.
struct FactorizationCertificate {
    CMatrix q;
    CMatrix p;
    CMatrix c;
    std::vector<CMatrix> q_pieces;
    std::vector<CMatrix> p_pieces;
    std::vector<WitnessTriple> witnesses;
    Strategy strategy = Strategy::Direct;
};

/// Seeded (Q, P) with rank(Q) = r, QP = 0, P nonzero (columns of P drawn from
/// ker(Q)).
std::pair<CMatrix, CMatrix> sample_zero_product_pair(int n, int r, Rng& rng,
                                                     const Tolerances& tol);

/// The case-1 construction: W inside ker(q) disjoint from im(p), dual
/// functionals g_i with g_i(w_j) = delta_ij and g_i(im p) = 0, then
/// A = sum v_i (x) g_i and B = sum w_i (x) f_i.
WitnessTriple construct_direct(const CMatrix& q, const CMatrix& p,
                               const RankFactorization& c_fact, const Tolerances& tol);

/// Strategy selection and splitting. Succeeds whenever the direct feasibility
/// bound holds or n >= k + 2.
FactorizationCertificate construct_certificate(const CMatrix& q, const CMatrix& p,
                                               const CMatrix& c, const Tolerances& tol);

struct FourEquationCheck {
    double ab = 0.0;    ///< AB = C
    double aqb = 0.0;   ///< (A+q)B = C
    double apb = 0.0;   ///< A(p+B) = C
    double aqpb = 0.0;  ///< (A+q)(p+B) = C
    bool pass = false;
};

FourEquationCheck verify_four_equations(const WitnessTriple& w, const CMatrix& c,
                                        const Tolerances& tol);

/// Replays the additivity argument against a concrete map: per witness checks
/// the four Phi-side equations, deduces Phi(q)Phi(p) = 0 per pair, and finally
/// Phi(Q)Phi(P) = 0 by summing pieces. Failures are verdicts, not errors.
VerificationReport derive_zero_product(const SuperOp& phi,
                                       const FactorizationCertificate& cert,
                                       const CMatrix& d, const Tolerances& tol);

}  // namespace preslab
