#pragma once

#include <vector>

#include "preslab/matrix.hpp"
#include "preslab/report.hpp"

namespace preslab {

/// Element of the commutative algebra C^m under coordinatewise multiplication.
/// The unit is the all-ones vector; invertible iff every coordinate is nonzero.
struct PointwiseElement {
    std::vector<cplx> values;

    int size() const { return static_cast<int>(values.size()); }

    static PointwiseElement unit(int m);
    static PointwiseElement zero(int m);

    PointwiseElement operator*(const PointwiseElement& o) const;
    PointwiseElement operator+(const PointwiseElement& o) const;
    PointwiseElement operator-(const PointwiseElement& o) const;

    double sup_norm() const;
};

bool is_invertible(const PointwiseElement& v, const Tolerances& tol);
PointwiseElement inverse(const PointwiseElement& v, const Tolerances& tol);

/// Coordinates of modulus < eps/2 are replaced by eps/2; the result is
/// invertible and within sup-distance eps of v.
PointwiseElement perturb_to_invertible(const PointwiseElement& v, double eps);

/// The composition operator f -> f o tau as an m x m matrix:
/// Phi(f)(i) = f(tau(i)). Always an algebra homomorphism.
CMatrix composition_map(const std::vector<int>& tau);

/// The finite analogue of the halving map: tau(i) = ceil(i/2).
std::vector<int> halving_index_map(int m);

PointwiseElement apply_map(const CMatrix& phi, const PointwiseElement& v);

/// Thm 3.3 dichotomies on C^m for a bijective linear map: d inferred from
/// invertible factor pairs (a, a^{-1} c).
VerificationReport check_theorem33_pointwise(const CMatrix& phi, const PointwiseElement& c,
                                             Rng& rng, const Tolerances& tol);

/// Indices with |c_i| <= pivot_eps; ann(c) is spanned by the coordinate
/// vectors supported there.
std::vector<int> annihilator_support(const PointwiseElement& c, const Tolerances& tol);

PointwiseElement sample_pointwise(int m, Rng& rng);

}  // namespace preslab
