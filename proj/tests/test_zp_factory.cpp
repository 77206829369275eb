#include <doctest.h>

#include "preslab/zp_factory.hpp"

using namespace preslab;

namespace {
const Tolerances kTol;

double zp_residual(const CMatrix& q, const CMatrix& p) {
    return (q * p).frobenius_norm() / (q.frobenius_norm() * p.frobenius_norm());
}
}  // namespace

TEST_CASE("sample_zero_product_pair construction guarantees") {
    Rng rng(1);
    SUBCASE("n=2 r=1") {
        const auto [q, p] = sample_zero_product_pair(2, 1, rng, kTol);
        CHECK(rank(q, kTol) == 1);
        CHECK(rank(p, kTol) <= 1);
        CHECK(zp_residual(q, p) <= kTol.check_tol);
    }
    SUBCASE("n=4 r=2 rank-nullity") {
        const auto [q, p] = sample_zero_product_pair(4, 2, rng, kTol);
        CHECK(rank(q, kTol) == 2);
        CHECK(nullspace_basis(q, kTol).size() == 2);
        CHECK(rank(p, kTol) <= 2);
        CHECK(zp_residual(q, p) <= kTol.check_tol);
    }
    SUBCASE("determinism") {
        Rng a(7), b(7);
        const auto pa = sample_zero_product_pair(3, 1, a, kTol);
        const auto pb = sample_zero_product_pair(3, 1, b, kTol);
        CHECK(pa.first == pb.first);
        CHECK(pa.second == pb.second);
    }
    CHECK_THROWS_AS(sample_zero_product_pair(3, 3, rng, kTol), DimensionMismatch);
}

TEST_CASE("construct_direct reproduces the E13/E31 witness") {
    // Q = E11, P = E22, C = E11 in M4: W = span{e3}, g1 = e3, so A = E13,
    // B = E31 and E13 E31 = E11 = C.
    const CMatrix q = CMatrix::unit(4, 0, 0);
    const CMatrix p = CMatrix::unit(4, 1, 1);
    const CMatrix c = CMatrix::unit(4, 0, 0);
    const auto w = construct_direct(q, p, rank_factorize(c, kTol), kTol);

    CHECK(rel_residual(w.a - CMatrix::unit(4, 0, 2), 1.0) <= 1e-12);
    CHECK(rel_residual(w.b - CMatrix::unit(4, 2, 0), 1.0) <= 1e-12);
    CHECK(w.residuals.ab_minus_c <= 1e-14);
    CHECK(w.residuals.ap <= 1e-14);
    CHECK(w.residuals.qb <= 1e-14);
}

TEST_CASE("construct_direct with P = 0 has no image constraint") {
    const CMatrix q = CMatrix::unit(2, 0, 0);
    const CMatrix p = CMatrix::zero(2, 2);
    const CMatrix c = CMatrix::unit(2, 0, 0);
    const auto w = construct_direct(q, p, rank_factorize(c, kTol), kTol);
    CHECK(w.residuals.ab_minus_c <= kTol.check_tol);
    CHECK(w.residuals.qb <= kTol.check_tol);
}

TEST_CASE("construct_direct detects infeasible dimensions") {
    // n=2, Q=E11, P=E22, C=I: dim ker(Q) - rank(P) = 0 < 2.
    CHECK_THROWS_AS(construct_direct(CMatrix::unit(2, 0, 0), CMatrix::unit(2, 1, 1),
                                     rank_factorize(CMatrix::identity(2), kTol), kTol),
                    InfeasibleDimension);
}

TEST_CASE("construct_certificate picks Direct when feasible") {
    Rng rng(3);
    const auto [q, p] = sample_zero_product_pair(5, 1, rng, kTol);  // dim ker = 4
    const CMatrix c = sample_ginibre(5, 1, rng) * sample_ginibre(1, 5, rng);
    // dim ker(Q) - rank(P) = 4 - rank(P) >= 4 - 4 = 0... rank(P) can be up
    // to 4 here, so force a low-rank P instead.
    const CMatrix p1 = CMatrix::from_columns(nullspace_basis(q, kTol)) *
                       sample_ginibre(4, 1, rng) * sample_ginibre(1, 5, rng);
    const auto cert = construct_certificate(q, p1, c, kTol);
    CHECK(cert.strategy == Strategy::Direct);
    CHECK(cert.witnesses.size() == 1);
    CHECK(verify_four_equations(cert.witnesses[0], c, kTol).pass);
}

TEST_CASE("construct_certificate splits P when the kernel is tight") {
    // n=4, k=1, Q rank 1 (dim ker = 3), P rank 3: 3-3 < 1, so P splits into
    // pieces of rank at most dim ker - k = 2, i.e. two pieces (ranks 2 + 1).
    Rng rng(5);
    const auto [q, p] = sample_zero_product_pair(4, 1, rng, kTol);
    REQUIRE(rank(p, kTol) == 3);
    const CMatrix c = sample_ginibre(4, 1, rng) * sample_ginibre(1, 4, rng);
    const auto cert = construct_certificate(q, p, c, kTol);
    CHECK(cert.strategy == Strategy::SplitP);
    CHECK(cert.p_pieces.size() == 2);
    CHECK(cert.witnesses.size() == 2);
    for (const auto& piece : cert.p_pieces) CHECK(rank(piece, kTol) <= 2);
    for (const auto& w : cert.witnesses) {
        CHECK(verify_four_equations(w, c, kTol).pass);
    }
    // reconstruction of P from its pieces
    CMatrix sum = CMatrix::zero(4, 4);
    for (const auto& piece : cert.p_pieces) sum = sum + piece;
    CHECK(rel_residual(sum - p, p.frobenius_norm()) <= kTol.check_tol);
}

TEST_CASE("construct_certificate reports the finite-dimension cutoff") {
    // n=3, k=2, Q rank 2 (dim ker = 1): 1 - 2 < 0 and n = k + 1.
    Rng rng(8);
    const auto [q, p] = sample_zero_product_pair(3, 2, rng, kTol);
    const CMatrix c = sample_ginibre(3, 2, rng) * sample_ginibre(2, 3, rng);
    CHECK_THROWS_AS(construct_certificate(q, p, c, kTol), InfeasibleDimension);
}

TEST_CASE("construct_certificate rejects bad inputs") {
    Rng rng(2);
    const auto [q, p] = sample_zero_product_pair(4, 1, rng, kTol);
    const CMatrix c = sample_ginibre(4, 1, rng) * sample_ginibre(1, 4, rng);
    CHECK_THROWS_AS(construct_certificate(CMatrix::zero(4, 4), p, c, kTol), ZeroMatrixError);
    CHECK_THROWS_AS(construct_certificate(q, p, CMatrix::zero(4, 4), kTol), ZeroMatrixError);
    // QP != 0
    CHECK_THROWS_AS(construct_certificate(CMatrix::identity(4), p, c, kTol),
                    std::invalid_argument);
}

TEST_CASE("verify_four_equations hand cases") {
    // the E13/E31 witness: QP = E11 E22 = 0, everything exact
    const CMatrix c = CMatrix::unit(4, 0, 0);
    WitnessTriple w;
    w.q_piece = CMatrix::unit(4, 0, 0);
    w.p_piece = CMatrix::unit(4, 1, 1);
    w.a = CMatrix::unit(4, 0, 2);
    w.b = CMatrix::unit(4, 2, 0);
    const auto chk = verify_four_equations(w, c, kTol);
    CHECK(chk.pass);
    CHECK(chk.ab == 0.0);
    CHECK(chk.aqpb == 0.0);

    // trivial witness: A = B = C = I, Q = P = 0
    WitnessTriple triv;
    triv.q_piece = CMatrix::zero(2, 2);
    triv.p_piece = CMatrix::zero(2, 2);
    triv.a = CMatrix::identity(2);
    triv.b = CMatrix::identity(2);
    CHECK(verify_four_equations(triv, CMatrix::identity(2), kTol).pass);

    // corrupting B breaks at least one equation
    WitnessTriple bad = w;
    bad.b = bad.b + CMatrix::unit(4, 0, 0);
    const auto broken = verify_four_equations(bad, c, kTol);
    CHECK_FALSE(broken.pass);
}

TEST_CASE("derive_zero_product on structural and random maps") {
    Rng rng(10);
    const auto [q, p] = sample_zero_product_pair(4, 2, rng, kTol);
    const CMatrix c = sample_ginibre(4, 1, rng) * sample_ginibre(1, 4, rng);
    const auto cert = construct_certificate(q, p, c, kTol);

    SUBCASE("conjugation map passes") {
        const CMatrix u = sample_invertible(4, rng, kTol);
        const cplx alpha(2, 1);
        const SuperOp phi = conjugation_map(alpha, u, kTol);
        const CMatrix d = (alpha * alpha) * (u * c * inverse(u, kTol));
        const auto rep = derive_zero_product(phi, cert, d, kTol);
        CHECK(rep.passed());
    }
    SUBCASE("identity map passes with D = C") {
        const auto rep = derive_zero_product(identity_superop(4), cert, c, kTol);
        CHECK(rep.passed());
        CHECK(rep.max_residual <= 1e-12);
    }
    SUBCASE("random bijective map fails") {
        const SuperOp phi = sample_superop(4, rng);
        const CMatrix d = sample_ginibre(4, rng);
        const auto rep = derive_zero_product(phi, cert, d, kTol);
        CHECK_FALSE(rep.passed());
    }
}

TEST_CASE("certificate soundness at scale") {
    // all n in 4..8, k in 1..n-3, several seeds; independent dense-product
    // re-check of every invariant
    for (int n = 4; n <= 8; ++n) {
        for (int k = 1; k <= n - 3; ++k) {
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                Rng rng(seed * 1000 + n * 10 + k);
                const int r = 1 + static_cast<int>(rng.next_u64() % (n - 1));
                const auto [q, p] = sample_zero_product_pair(n, r, rng, kTol);
                const CMatrix c = sample_ginibre(n, k, rng) * sample_ginibre(k, n, rng);
                const auto cert = construct_certificate(q, p, c, kTol);

                CMatrix q_sum = CMatrix::zero(n, n);
                for (const auto& piece : cert.q_pieces) q_sum = q_sum + piece;
                CHECK(rel_residual(q_sum - q, q.frobenius_norm()) <= kTol.check_tol);
                CMatrix p_sum = CMatrix::zero(n, n);
                for (const auto& piece : cert.p_pieces) p_sum = p_sum + piece;
                CHECK(rel_residual(p_sum - p, p.frobenius_norm()) <= kTol.check_tol);

                REQUIRE(cert.witnesses.size() ==
                        cert.q_pieces.size() * cert.p_pieces.size());
                std::size_t idx = 0;
                for (const auto& qp : cert.q_pieces) {
                    for (const auto& pp : cert.p_pieces) {
                        const auto& w = cert.witnesses[idx++];
                        CHECK((qp * pp).frobenius_norm() <=
                              kTol.check_tol * q.frobenius_norm() * p.frobenius_norm());
                        CHECK(rel_residual(w.a * w.b - c, c.frobenius_norm()) <=
                              kTol.check_tol);
                        CHECK(verify_four_equations(w, c, kTol).pass);
                    }
                }
            }
        }
    }
}
