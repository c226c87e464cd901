#pragma once

// Hilbert-Burch data for the triple-point ideals of the X3 family.  Each
// ideal <u^a, v^b, w^c> (powers of pairwise independent forms in a 2-dim
// form space) has a free resolution 0 -> S^2 -phi-> S^3 -> J -> 0; the 2x2
// minors of phi recover the generators up to nonzero scalars, which we
// record.  Syzygies are computed degree by degree in the 2-variable subring
// spanned by the first two forms and substituted back.

#include <array>
#include <optional>
#include <vector>

#include "x3der/arrangement.hpp"
#include "x3der/derivation.hpp"
#include "x3der/field.hpp"
#include "x3der/linalg.hpp"
#include "x3der/poly.hpp"

namespace x3der {

template <class K>
struct PowerOfLinear {
    std::vector<K> form;  // ambient coefficient vector
    int mult = 1;

    Poly<K> poly() const {
        return pow(Poly<K>::linear_form(static_cast<int>(form.size()), form), mult);
    }
    int degree() const { return mult; }
};

template <class K>
struct TriplePointIdeal {
    std::array<PowerOfLinear<K>, 3> gens;  // fixed generator order
};

// J(Y1) = <x^m1, y^m2, (x-alpha y)^m4>, J(Y2) = <x^m1, z^m3, (x+z)^m5>,
// J(Y3) = <y^m2, z^m3, (y+z)^m6>
template <class F, class K = typename F::Scalar>
std::array<TriplePointIdeal<K>, 3> triple_point_ideals(const F& field, const K& alpha,
                                                       const std::vector<int>& m) {
    if (alpha.is_zero() || alpha == field.one())
        throw degenerate_moduli("alpha in {0,1} collapses the moduli");
    if (m.size() != 6) throw invalid_input("X3 multiplicity vector must have 6 entries");
    for (int mi : m)
        if (mi < 1) throw invalid_input("multiplicities must be positive");
    const K o = field.one(), z = field.zero();
    auto P = [&](std::vector<K> f, int mult) { return PowerOfLinear<K>{std::move(f), mult}; };
    TriplePointIdeal<K> j1{{P({o, z, z}, m[0]), P({z, o, z}, m[1]), P({o, -alpha, z}, m[3])}};
    TriplePointIdeal<K> j2{{P({o, z, z}, m[0]), P({z, z, o}, m[2]), P({o, z, o}, m[4])}};
    TriplePointIdeal<K> j3{{P({z, o, z}, m[1]), P({z, z, o}, m[2]), P({z, o, o}, m[5])}};
    return {j1, j2, j3};
}

template <class K>
struct HilbertBurch {
    Mat<Poly<K>> phi;              // 3x2, ambient variables
    std::array<int, 2> col_deg;    // syzygy degrees, ascending
    std::array<K, 3> minor_scale;  // signed complementary 2x2 minor = scale_i * gen_i
    std::array<Poly<K>, 3> gens;
};

namespace detail {

// the three signed 2x2 minors, in complementary-generator order:
// minor_1 from rows {2,3}, minor_2 from rows {1,3}, minor_3 from rows {1,2}
template <class K>
std::array<Poly<K>, 3> signed_minors(const Mat<Poly<K>>& phi) {
    auto minor = [&](int r1, int r2) {
        return phi(r1, 0) * phi(r2, 1) - phi(r1, 1) * phi(r2, 0);
    };
    return {minor(1, 2), minor(0, 2), minor(0, 1)};
}

}  // namespace detail

// Minimal syzygy pair of (f1, f2, f3), powers of pairwise independent linear
// forms spanning a 2-dim space.  Deterministic echelon choice; the
// minor/generator correspondence is validated before returning.
template <class F, class K = typename F::Scalar>
HilbertBurch<K> hilbert_burch(const F& field, const TriplePointIdeal<K>& ideal) {
    const int nv = static_cast<int>(ideal.gens[0].form.size());
    const auto& u = ideal.gens[0].form;
    const auto& v = ideal.gens[1].form;
    const auto& w = ideal.gens[2].form;
    if (proportional(u, v) || proportional(u, w) || proportional(v, w))
        throw invalid_input("ideal generators on proportional forms are not codimension two");

    // express w = xi*u + eta*v; fails when the forms do not span a plane
    Mat<K> uv(nv, 2);
    for (int i = 0; i < nv; ++i) {
        uv(i, 0) = u[i];
        uv(i, 1) = v[i];
    }
    auto xe = solve_unique(uv, w);
    if (!xe) throw invalid_input("triple-point forms are not coplanar");
    const K xi = (*xe)[0], eta = (*xe)[1];
    if (xi.is_zero() || eta.is_zero())
        throw invalid_input("third form proportional to a generator form");

    // local ring K[s,t]: u -> s, v -> t, w -> xi*s + eta*t
    const int a = ideal.gens[0].mult, b = ideal.gens[1].mult, c = ideal.gens[2].mult;
    std::array<Poly<K>, 3> local = {
        pow(Poly<K>::variable(2, 0, field.one()), a),
        pow(Poly<K>::variable(2, 1, field.one()), b),
        pow(Poly<K>::linear_form(2, {xi, eta}), c)};
    const std::array<int, 3> deg = {a, b, c};

    // syzygies of degree r are the kernel of
    //   R_{r-a} + R_{r-b} + R_{r-c} -> R_r,  (p,q,s) -> p f1 + q f2 + s f3
    auto syzygies_of_degree = [&](int r) {
        std::vector<std::vector<Monomial>> bases(3);
        std::vector<int> offset(4, 0);
        for (int g = 0; g < 3; ++g) {
            if (r - deg[g] >= 0) bases[g] = mono_basis(2, r - deg[g]);
            offset[g + 1] = offset[g] + static_cast<int>(bases[g].size());
        }
        const auto target = mono_basis(2, r);
        Mat<K> m(static_cast<int>(target.size()), offset[3]);
        for (int g = 0; g < 3; ++g)
            for (size_t f = 0; f < bases[g].size(); ++f) {
                Poly<K> prod = Poly<K>::monomial(2, bases[g][f], field.one()) * local[g];
                for (const auto& t : prod.terms())
                    m(detail::mono_index(target, t.m), offset[g] + static_cast<int>(f)) += t.c;
            }
        struct Piece {
            std::vector<std::vector<K>> kernel;
            std::vector<std::vector<Monomial>> bases;
            std::vector<int> offset;
        };
        return Piece{kernel_basis(field, m), std::move(bases), std::move(offset)};
    };

    auto to_triple = [&](const std::vector<K>& vec, const auto& piece) {
        std::array<Poly<K>, 3> out = {Poly<K>(2), Poly<K>(2), Poly<K>(2)};
        for (int g = 0; g < 3; ++g)
            for (size_t f = 0; f < piece.bases[g].size(); ++f) {
                const K& cc = vec[piece.offset[g] + f];
                if (!cc.is_zero()) out[g] += Poly<K>::monomial(2, piece.bases[g][f], cc);
            }
        return out;
    };

    // hunt the two minimal generators of the (rank-2 free) syzygy module
    std::vector<std::array<Poly<K>, 3>> found;
    std::array<int, 2> col_deg = {0, 0};
    std::vector<std::array<Poly<K>, 3>> prev_layer;  // module span at degree r-1
    const int rmax = a + b + c;
    for (int r = 0; r <= rmax && found.size() < 2; ++r) {
        auto piece = syzygies_of_degree(r);
        // span of S_1 * (module generated so far), maintained degreewise
        RowSpace<K> span;
        const auto to_vec = [&](const std::array<Poly<K>, 3>& s) {
            std::vector<K> vec(piece.offset[3]);
            for (int g = 0; g < 3; ++g)
                for (const auto& t : s[g].terms())
                    vec[piece.offset[g] + detail::mono_index(piece.bases[g], t.m)] = t.c;
            return vec;
        };
        std::vector<std::array<Poly<K>, 3>> layer;
        for (const auto& s : prev_layer)
            for (int var = 0; var < 2; ++var) {
                Poly<K> x = Poly<K>::variable(2, var, field.one());
                std::array<Poly<K>, 3> shifted = {s[0] * x, s[1] * x, s[2] * x};
                if (span.add(to_vec(shifted))) layer.push_back(shifted);
            }
        for (const auto& vec : piece.kernel) {
            auto inserted = span.add(vec);
            if (!inserted) continue;
            auto trip = to_triple(*inserted, piece);
            layer.push_back(trip);
            if (found.size() < 2) {
                col_deg[found.size()] = r;
                found.push_back(trip);
            }
        }
        prev_layer = std::move(layer);
    }
    X3DER_CHECK(found.size() == 2, "Hilbert-Burch syzygy pair not found within the degree bound");
    X3DER_CHECK(col_deg[0] + col_deg[1] == a + b + c, "syzygy degrees do not sum to the generator degrees");

    // back to ambient variables: s -> u, t -> v
    Mat<Poly<K>> phi(3, 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) {
            const Poly<K>& p = found[j][i];
            Poly<K> amb(nv);
            for (const auto& t : p.terms()) {
                Poly<K> term = Poly<K>::constant(nv, t.c);
                if (t.m.e[0] > 0)
                    term = term * pow(Poly<K>::linear_form(nv, u), t.m.e[0]);
                if (t.m.e[1] > 0)
                    term = term * pow(Poly<K>::linear_form(nv, v), t.m.e[1]);
                amb += term;
            }
            phi(i, j) = amb;
        }

    HilbertBurch<K> hb;
    hb.phi = phi;
    hb.col_deg = col_deg;
    for (int i = 0; i < 3; ++i) hb.gens[i] = ideal.gens[i].poly();

    // validate: columns are syzygies and the signed minors recover the
    // complementary generators up to nonzero scalars
    for (int j = 0; j < 2; ++j) {
        Poly<K> s(nv);
        for (int i = 0; i < 3; ++i) s += hb.gens[i] * phi(i, j);
        X3DER_CHECK(s.is_zero(), "phi column is not a syzygy");
    }
    auto minors = detail::signed_minors(phi);
    for (int i = 0; i < 3; ++i) {
        X3DER_CHECK(!minors[i].is_zero(), "vanishing Hilbert-Burch minor");
        K k = minors[i].leading().c * hb.gens[i].leading().c.inv();
        X3DER_CHECK(minors[i] == hb.gens[i] * k, "minor is not proportional to its generator");
        hb.minor_scale[i] = k;
    }
    return hb;
}

}  // namespace x3der
