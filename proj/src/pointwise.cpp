#include "preslab/pointwise.hpp"

#include <algorithm>
#include <cmath>

namespace preslab {

namespace {

PointwiseElement binary_op(const PointwiseElement& a, const PointwiseElement& b,
                           cplx (*op)(const cplx&, const cplx&)) {
    if (a.size() != b.size()) throw DimensionMismatch("pointwise arity mismatch");
    PointwiseElement r;
    r.values.resize(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) r.values[i] = op(a.values[i], b.values[i]);
    return r;
}

}  // namespace

PointwiseElement PointwiseElement::unit(int m) {
    PointwiseElement e;
    e.values.assign(m, cplx(1.0, 0.0));
    return e;
}

PointwiseElement PointwiseElement::zero(int m) {
    PointwiseElement e;
    e.values.assign(m, cplx(0.0, 0.0));
    return e;
}

PointwiseElement PointwiseElement::operator*(const PointwiseElement& o) const {
    return binary_op(*this, o, +[](const cplx& x, const cplx& y) { return x * y; });
}

PointwiseElement PointwiseElement::operator+(const PointwiseElement& o) const {
    return binary_op(*this, o, +[](const cplx& x, const cplx& y) { return x + y; });
}

PointwiseElement PointwiseElement::operator-(const PointwiseElement& o) const {
    return binary_op(*this, o, +[](const cplx& x, const cplx& y) { return x - y; });
}

double PointwiseElement::sup_norm() const {
    double s = 0.0;
    for (const auto& v : values) s = std::max(s, std::abs(v));
    return s;
}

bool is_invertible(const PointwiseElement& v, const Tolerances& tol) {
    return std::all_of(v.values.begin(), v.values.end(),
                       [&](const cplx& x) { return std::abs(x) > tol.pivot_eps; });
}

PointwiseElement inverse(const PointwiseElement& v, const Tolerances& tol) {
    if (!is_invertible(v, tol)) throw SingularMatrix("pointwise inverse: zero coordinate");
    PointwiseElement r = v;
    for (auto& x : r.values) x = cplx(1.0, 0.0) / x;
    return r;
}

PointwiseElement perturb_to_invertible(const PointwiseElement& v, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("perturb_to_invertible: eps <= 0");
    PointwiseElement r = v;
    for (auto& x : r.values) {
        if (std::abs(x) < eps / 2.0) x = cplx(eps / 2.0, 0.0);
    }
    return r;
}

CMatrix composition_map(const std::vector<int>& tau) {
    const int m = static_cast<int>(tau.size());
    CMatrix phi(m, m);
    for (int i = 0; i < m; ++i) {
        if (tau[i] < 0 || tau[i] >= m) {
            throw std::invalid_argument("composition_map: tau not total on the index set");
        }
        phi(i, tau[i]) = 1.0;
    }
    return phi;
}

std::vector<int> halving_index_map(int m) {
    std::vector<int> tau(m);
    for (int i = 0; i < m; ++i) tau[i] = (i + 1) / 2;
    return tau;
}

PointwiseElement apply_map(const CMatrix& phi, const PointwiseElement& v) {
    if (phi.cols() != v.size()) throw DimensionMismatch("apply_map");
    PointwiseElement r = PointwiseElement::zero(phi.rows());
    for (int i = 0; i < phi.rows(); ++i)
        for (int j = 0; j < phi.cols(); ++j) r.values[i] += phi(i, j) * v.values[j];
    return r;
}

VerificationReport check_theorem33_pointwise(const CMatrix& phi, const PointwiseElement& c,
                                             Rng& rng, const Tolerances& tol) {
    if (!is_invertible(phi, tol)) {
        throw SingularMatrix("check_theorem33_pointwise: map is not bijective");
    }

    const auto one_target = [&](Rng& r) {
        PointwiseElement a = perturb_to_invertible(sample_pointwise(c.size(), r), 0.5);
        return apply_map(phi, a) * apply_map(phi, inverse(a, tol) * c);
    };
    Rng base = rng.fork(0);
    const PointwiseElement d = one_target(base);
    const double scale = std::max(1.0, d.sup_norm());
    for (int i = 1; i <= 10; ++i) {
        Rng sub = rng.fork(static_cast<std::uint64_t>(i));
        if ((one_target(sub) - d).sup_norm() / scale > tol.check_tol) {
            throw NotAPreserver("check_theorem33_pointwise: inconsistent target");
        }
    }

    const bool c_zero = c.sup_norm() <= tol.check_tol;
    const bool d_zero = d.sup_norm() <= tol.check_tol;
    const bool c_inv = is_invertible(c, tol);
    const bool d_inv = is_invertible(d, tol);

    VerificationReport rep;
    rep.name = "check_theorem33_pointwise";
    rep.n = c.size();
    rep.add_detail("c=0 iff d=0", c_zero == d_zero ? 0.0 : 1.0);
    rep.add_detail("c invertible iff d invertible", c_inv == d_inv ? 0.0 : 1.0);
    rep.finalize(tol.check_tol);
    return rep;
}

std::vector<int> annihilator_support(const PointwiseElement& c, const Tolerances& tol) {
    std::vector<int> support;
    for (int i = 0; i < c.size(); ++i) {
        if (std::abs(c.values[i]) <= tol.pivot_eps) support.push_back(i);
    }
    return support;
}

PointwiseElement sample_pointwise(int m, Rng& rng) {
    PointwiseElement r = PointwiseElement::zero(m);
    for (auto& x : r.values) x = rng.next_gaussian();
    return r;
}

}  // namespace preslab
