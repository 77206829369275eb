#include <doctest.h>

#include <cmath>

#include "preslab/matrix.hpp"

using namespace preslab;

namespace {
const Tolerances kTol;
}

TEST_CASE("tolerances validate their range") {
    CHECK_NOTHROW(kTol.validate());
    Tolerances bad;
    bad.pivot_eps = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.pivot_eps = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("lu_decompose identity") {
    const auto lu = lu_decompose(CMatrix::identity(2));
    CHECK(lu.lower == CMatrix::identity(2));
    CHECK(lu.upper == CMatrix::identity(2));
    CHECK(lu.min_abs_pivot == doctest::Approx(1.0));
}

TEST_CASE("lu_decompose permutation matrix swaps rows") {
    CMatrix m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    const auto lu = lu_decompose(m);
    CHECK(lu.permutation == std::vector<int>{1, 0});
    CHECK(std::abs(lu.upper(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(lu.upper(1, 1)) == doctest::Approx(1.0));
    CHECK(lu.min_abs_pivot == doctest::Approx(1.0));
}

TEST_CASE("lu_decompose reconstructs a random matrix") {
    Rng rng(42);
    const CMatrix m = sample_ginibre(5, rng);
    const auto lu = lu_decompose(m);
    const CMatrix recon = lu.lower * lu.upper;
    const CMatrix pm = lu.permutation_matrix() * m;
    CHECK(rel_residual(recon - pm, pm.frobenius_norm()) <= 1e-12);
}

TEST_CASE("lu_decompose rejects non-square input") {
    CHECK_THROWS_AS(lu_decompose(CMatrix(2, 3)), DimensionMismatch);
}

TEST_CASE("is_invertible basic verdicts") {
    CHECK(is_invertible(CMatrix::identity(3), kTol));
    CHECK_FALSE(is_invertible(CMatrix::zero(3, 3), kTol));
    CHECK_FALSE(is_invertible(CMatrix::unit(2, 0, 0), kTol));  // det = 0 by hand
    CHECK_THROWS_AS(is_invertible(CMatrix(2, 3), kTol), DimensionMismatch);
}

TEST_CASE("inverse on identity and diagonal") {
    CHECK(inverse(CMatrix::identity(3), kTol) == CMatrix::identity(3));
    const CMatrix d = CMatrix::diagonal({cplx(2, 0), cplx(4, 0)});
    const CMatrix d_inv = inverse(d, kTol);
    CHECK(std::abs(d_inv(0, 0) - cplx(0.5, 0)) <= 1e-15);
    CHECK(std::abs(d_inv(1, 1) - cplx(0.25, 0)) <= 1e-15);
    CHECK_THROWS_AS(inverse(CMatrix::zero(2, 2), kTol), SingularMatrix);
}

TEST_CASE("inverse residual oracle on random input") {
    Rng rng(7);
    const CMatrix m = sample_invertible(4, rng, kTol);
    const CMatrix prod = m * inverse(m, kTol);
    CHECK(rel_residual(prod - CMatrix::identity(4), m.frobenius_norm()) <= kTol.check_tol);
}

TEST_CASE("inverse is an involution within tolerance") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix m = sample_invertible(5, rng, kTol);
        const CMatrix back = inverse(inverse(m, kTol), kTol);
        CHECK((back - m).frobenius_norm() <= 10.0 * kTol.check_tol * m.frobenius_norm());
    }
}

TEST_CASE("rank on hand-computed cases") {
    CHECK(rank(CMatrix::zero(3, 3), kTol) == 0);
    const CMatrix two = CMatrix::unit(3, 0, 0) + CMatrix::unit(3, 1, 1);
    CHECK(rank(two, kTol) == 2);  // hand row reduction
    Rng rng(3);
    const CMatrix v = sample_ginibre(4, 1, rng);
    const CMatrix f = sample_ginibre(1, 4, rng);
    CHECK(rank(v * f, kTol) == 1);
}

TEST_CASE("nullspace_basis on hand-computed cases") {
    CHECK(nullspace_basis(CMatrix::identity(3), kTol).empty());

    const auto basis = nullspace_basis(CMatrix::unit(2, 0, 0), kTol);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0][0] == cplx(0.0, 0.0));
    CHECK(basis[0][1] == cplx(1.0, 0.0));  // ker(E11) = span{e2}

    CHECK(nullspace_basis(CMatrix::zero(3, 3), kTol).size() == 3);
}

TEST_CASE("rank-nullity holds on random samples") {
    Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 5);
        const int r = 1 + static_cast<int>(rng.next_u64() % n);
        const CMatrix m = sample_ginibre(n, r, rng) * sample_ginibre(r, n, rng);
        const auto ns = nullspace_basis(m, kTol);
        CHECK(rank(m, kTol) + static_cast<int>(ns.size()) == m.cols());
        for (const auto& v : ns) {
            const CMatrix mv = m * CMatrix::column(v);
            CHECK(mv.frobenius_norm() <= kTol.check_tol * m.frobenius_norm() * vec_norm(v));
        }
    }
}

TEST_CASE("rank is submultiplicative on random samples") {
    Rng rng(123);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + static_cast<int>(rng.next_u64() % 4);
        const int ra = 1 + static_cast<int>(rng.next_u64() % n);
        const int rb = 1 + static_cast<int>(rng.next_u64() % n);
        const CMatrix a = sample_ginibre(n, ra, rng) * sample_ginibre(ra, n, rng);
        const CMatrix b = sample_ginibre(n, rb, rng) * sample_ginibre(rb, n, rng);
        CHECK(rank(a * b, kTol) <= std::min(rank(a, kTol), rank(b, kTol)));
    }
}

TEST_CASE("find_regular_scalar walks the candidate sequence") {
    // x = I (n=2): lambda=1 gives I-x=0, lambda=1/2 succeeds.
    CHECK(find_regular_scalar(CMatrix::identity(2), kTol) == cplx(0.5, 0.0));
    // x = 0: I - 0 = I, first candidate works.
    CHECK(find_regular_scalar(CMatrix::zero(3, 3), kTol) == cplx(1.0, 0.0));
    // x = diag(1,2): pivots 1-lambda and 1-2*lambda rule out 1 and 1/2.
    const CMatrix d = CMatrix::diagonal({cplx(1, 0), cplx(2, 0)});
    CHECK(find_regular_scalar(d, kTol) == cplx(1.0 / 3.0, 0.0));
}

TEST_CASE("find_regular_scalar postcondition re-checks") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix x = sample_ginibre(4, rng);
        const cplx lambda = find_regular_scalar(x, kTol);
        CHECK(lambda != cplx(0.0, 0.0));
        CHECK(is_invertible(CMatrix::identity(4) - lambda * x, kTol));
    }
}

TEST_CASE("sampling is deterministic per seed") {
    Rng a(2024), b(2024);
    CHECK(sample_ginibre(3, a) == sample_ginibre(3, b));
    Rng fa = a.fork(1), fb = b.fork(1);
    CHECK(sample_ginibre(2, fa) == sample_ginibre(2, fb));
    Rng fc = a.fork(2);
    CHECK_FALSE(sample_ginibre(2, fc) == sample_ginibre(2, fb));
}

TEST_CASE("ginibre samples are empirically invertible") {
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        CHECK(is_invertible(sample_ginibre(3, rng), kTol));
    }
}

TEST_CASE("ginibre n=1 is a single scalar") {
    Rng rng(1);
    const CMatrix m = sample_ginibre(1, rng);
    CHECK(m.rows() == 1);
    CHECK(m.cols() == 1);
    CHECK(m.all_finite());
}

TEST_CASE("orthonormal_columns drops dependent columns") {
    CMatrix m(3, 3);
    m(0, 0) = 1.0;
    m(0, 1) = 2.0;  // dependent on column 0
    m(1, 2) = 1.0;
    const CMatrix q = orthonormal_columns(m, kTol);
    CHECK(q.cols() == 2);
    const CMatrix gram = q.adjoint() * q;
    CHECK(rel_residual(gram - CMatrix::identity(2), 1.0) <= 1e-12);
}
