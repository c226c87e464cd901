#pragma once

// Shared helpers for the unit tests: seeded random scalars, polynomials,
// and unimodular matrices over both supported fields.

#include <random>
#include <vector>

#include "x3der/arrangement.hpp"
#include "x3der/linalg.hpp"
#include "x3der/poly.hpp"

namespace testutil {

using namespace x3der;

using Rng = std::mt19937_64;

template <class F>
typename F::Scalar random_scalar(const F& field, Rng& rng, int bound = 9) {
    if constexpr (std::is_same_v<F, RatField>) {
        long long num = static_cast<long long>(rng() % (2 * bound + 1)) - bound;
        long long den = 1 + static_cast<long long>(rng() % 3);
        return Rat(mpq_class(static_cast<long>(num)) / mpq_class(static_cast<long>(den)));
    } else {
        return field.of_int(static_cast<long long>(rng() % field.p));
    }
}

template <class F>
typename F::Scalar random_nonzero(const F& field, Rng& rng, int bound = 9) {
    for (;;) {
        auto s = random_scalar(field, rng, bound);
        if (!s.is_zero()) return s;
    }
}

template <class F>
Poly<typename F::Scalar> random_poly(const F& field, Rng& rng, int nvars, int max_deg,
                                     int terms) {
    using K = typename F::Scalar;
    Poly<K> p(nvars);
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        int deg = static_cast<int>(rng() % (max_deg + 1));
        for (int rep = 0; rep < deg; ++rep) m.e[rng() % nvars]++;
        p += Poly<K>::monomial(nvars, m, random_scalar(field, rng));
    }
    return p;
}

template <class F>
Poly<typename F::Scalar> random_homogeneous(const F& field, Rng& rng, int nvars, int deg) {
    using K = typename F::Scalar;
    auto basis = mono_basis(nvars, deg);
    Poly<K> p(nvars);
    for (const auto& m : basis)
        if (rng() % 2) p += Poly<K>::monomial(nvars, m, random_scalar(field, rng));
    if (p.is_zero()) p = Poly<K>::monomial(nvars, basis[rng() % basis.size()], field.one());
    return p;
}

// product of random shears and swaps; always invertible
template <class F>
Mat<typename F::Scalar> random_unimodular(const F& field, Rng& rng, int n, int ops = 8) {
    using K = typename F::Scalar;
    Mat<K> t = Mat<K>::identity(n, field.one());
    for (int o = 0; o < ops; ++o) {
        int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n);
        if (i == j) continue;
        if (rng() % 4 == 0) {
            for (int c = 0; c < n; ++c) std::swap(t(i, c), t(j, c));
        } else {
            K s = random_scalar(field, rng, 3);
            for (int c = 0; c < n; ++c) t(i, c) = t(i, c) + s * t(j, c);
        }
    }
    return t;
}

template <class F>
std::vector<std::vector<typename F::Scalar>> matrix_rows(const F&, const Mat<typename F::Scalar>& m) {
    std::vector<std::vector<typename F::Scalar>> rows;
    for (int i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
    return rows;
}

}  // namespace testutil
