#pragma once

#include <utility>
#include <vector>

#include "preslab/matrix.hpp"
#include "preslab/report.hpp"
#include "preslab/superop.hpp"

namespace preslab {

/// Factor pair (A, B) with AB = C and one invertible factor — the same
/// parametrization the invertible-case proofs work with.
std::pair<CMatrix, CMatrix> sample_factor_pair(const CMatrix& c, Rng& rng,
                                               const Tolerances& tol);

/// D computed as Phi(A0)Phi(A0^{-1} C) for a seeded invertible A0 and
/// cross-checked against extra samples; throws NotAPreserver on inconsistency.
CMatrix infer_target(const SuperOp& phi, const CMatrix& c, Rng& rng, const Tolerances& tol);

/// max over sampled factor pairs of ||Phi(A)Phi(B) - D|| / max(1, ||D||).
VerificationReport check_preserves_at(const SuperOp& phi, const CMatrix& c,
                                      const CMatrix& d, int samples, Rng& rng,
                                      const Tolerances& tol);

/// max ||Phi(Q)Phi(P)|| over sampled zero-product pairs.
VerificationReport check_zero_product_preserving(const SuperOp& phi, int samples, Rng& rng,
                                                 const Tolerances& tol);

/// Images of ann basis elements of C must annihilate D on the same side.
VerificationReport check_annihilator_inclusion(const SuperOp& phi, const CMatrix& c,
                                               const CMatrix& d, const Tolerances& tol);

/// rank(C) = rank(D) with D inferred.
VerificationReport check_rank_equality(const SuperOp& phi, const CMatrix& c, Rng& rng,
                                       const Tolerances& tol);

/// The two dichotomies: C = 0 iff D = 0, C invertible iff D invertible.
VerificationReport check_theorem33(const SuperOp& phi, const CMatrix& c, Rng& rng,
                                   const Tolerances& tol);

/// ||(I-a)^{-1} - I - (a^{-1}-I)^{-1}||, relative. Requires a and I-a invertible.
double hua_identity_residual(const CMatrix& a, const Tolerances& tol);

/// phi(x^{-1}) = z phi(x)^{-1} z over sampled invertible x, including one
/// sample with 1 in the spectrum handled by lambda rescaling.
VerificationReport check_inverse_formula(const SuperOp& phi, const CMatrix& z, int samples,
                                         Rng& rng, const Tolerances& tol);

/// psi(x^{-1}) = psi(x)^{-1} for sampled invertible x; psi must be unital.
VerificationReport check_strong_invertibility(const SuperOp& psi, int samples, Rng& rng,
                                              const Tolerances& tol);

/// Exhaustive polarized Jordan identity over all n^4 basis pairs.
VerificationReport check_jordan(const SuperOp& psi, const Tolerances& tol);

struct MultiplicativityClass {
    enum class Kind { Homomorphism, Antihomomorphism, Both, Neither };
    Kind kind = Kind::Neither;
    double homo_residual = 0.0;
    double anti_residual = 0.0;
    /// One residual was accepted but the rejected one did not exceed it by the
    /// required 10^3 margin.
    bool margin_warning = false;
};

const char* to_string(MultiplicativityClass::Kind k);

/// Homomorphism vs antihomomorphism over all basis pairs, with margin policy.
MultiplicativityClass classify_multiplicativity(const SuperOp& psi, const Tolerances& tol);

/// Staged invertible-case pipeline: target inference, unit recovery and
/// z^{-1} = Phi(C) D^{-1}, the inverse formula, strong invertibility of
/// z^{-1} Phi, the Jordan identity, and the final classification.
struct PipelineReport {
    std::vector<VerificationReport> stages;
    MultiplicativityClass mclass;
    CMatrix z;
    CMatrix d;
    Verdict overall = Verdict::Pass;

    bool passed() const { return overall == Verdict::Pass; }
};

PipelineReport theorem41_pipeline(const SuperOp& phi, const CMatrix& c, int samples,
                                  Rng& rng, const Tolerances& tol);

}  // namespace preslab
