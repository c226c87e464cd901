#pragma once

// Central hyperplane multi-arrangements: the data model, the one-parameter
// X3 moduli family, intersection lattices with Mobius values, characteristic
// polynomials, and the Ziegler multi-restriction.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "x3der/field.hpp"
#include "x3der/linalg.hpp"
#include "x3der/poly.hpp"

namespace x3der {

template <class K>
bool proportional(const std::vector<K>& u, const std::vector<K>& v) {
    for (size_t i = 0; i < u.size(); ++i)
        for (size_t j = i + 1; j < u.size(); ++j)
            if (u[i] * v[j] != u[j] * v[i]) return false;
    return true;
}

template <class K>
class MultiArrangement {
  public:
    MultiArrangement(int nvars, std::vector<std::vector<K>> forms, std::vector<int> mult)
        : nvars_(nvars), forms_(std::move(forms)), mult_(std::move(mult)) {
        if (nvars_ < 2 || nvars_ > kMaxVars)
            throw invalid_input("ambient dimension must be 2, 3 or 4");
        if (forms_.size() != mult_.size())
            throw invalid_input("multiplicity count does not match hyperplane count");
        if (forms_.empty()) throw invalid_input("empty arrangement");
        for (const auto& f : forms_) {
            if (static_cast<int>(f.size()) != nvars_)
                throw invalid_input("form length does not match ambient dimension");
            bool nonzero = false;
            for (const auto& c : f) nonzero = nonzero || !c.is_zero();
            if (!nonzero) throw invalid_input("zero linear form");
        }
        for (size_t i = 0; i < forms_.size(); ++i)
            for (size_t j = i + 1; j < forms_.size(); ++j)
                if (proportional(forms_[i], forms_[j]))
                    throw invalid_input("duplicate hyperplane (proportional forms)");
        for (int m : mult_)
            if (m < 1) throw invalid_input("multiplicities must be positive");
    }

    int nvars() const { return nvars_; }
    int size() const { return static_cast<int>(forms_.size()); }
    int weight() const {
        int w = 0;
        for (int m : mult_) w += m;
        return w;
    }
    const std::vector<K>& form(int i) const { return forms_[i]; }
    const std::vector<std::vector<K>>& forms() const { return forms_; }
    int mult(int i) const { return mult_[i]; }
    const std::vector<int>& mults() const { return mult_; }
    bool is_simple() const {
        return std::all_of(mult_.begin(), mult_.end(), [](int m) { return m == 1; });
    }

    MultiArrangement simple() const {
        return MultiArrangement(nvars_, forms_, std::vector<int>(forms_.size(), 1));
    }
    MultiArrangement with_mult(std::vector<int> m) const {
        return MultiArrangement(nvars_, forms_, std::move(m));
    }

    Poly<K> form_poly(int i) const { return Poly<K>::linear_form(nvars_, forms_[i]); }
    // Q(A,m) = product of the forms raised to their multiplicities
    Poly<K> defining_poly() const {
        Poly<K> q = pow(form_poly(0), mult_[0]);
        for (int i = 1; i < size(); ++i) q = q * pow(form_poly(i), mult_[i]);
        return q;
    }

    Mat<K> coefficient_matrix() const { return Mat<K>::from_rows(forms_); }
    int rank() const { return x3der::rank(coefficient_matrix()); }

  private:
    int nvars_;
    std::vector<std::vector<K>> forms_;
    std::vector<int> mult_;
};

// forms composed with x -> Tx (coefficient rows become row * T)
template <class K>
MultiArrangement<K> transform(const MultiArrangement<K>& a, const Mat<K>& t) {
    std::vector<std::vector<K>> forms;
    for (int i = 0; i < a.size(); ++i) {
        std::vector<K> row(a.nvars());
        for (int j = 0; j < a.nvars(); ++j) {
            K acc;
            for (int k = 0; k < a.nvars(); ++k) acc += a.form(i)[k] * t(k, j);
            row[j] = acc;
        }
        forms.push_back(std::move(row));
    }
    return MultiArrangement<K>(a.nvars(), std::move(forms), a.mults());
}

// ---------------------------------------------------------------------------
// The X3 moduli family: coefficient rows x, y, z, x - alpha*y, x + z, y + z.

template <class F, class K = typename F::Scalar>
MultiArrangement<K> x3_arrangement(const F& field, const K& alpha) {
    if (alpha.is_zero())
        throw degenerate_moduli("alpha = 0 repeats a hyperplane (H1 = H4)");
    if (alpha == field.one())
        throw degenerate_moduli("alpha = 1 degenerates the lattice to the braid arrangement");
    const K o = field.one(), z = field.zero();
    std::vector<std::vector<K>> forms = {
        {o, z, z}, {z, o, z}, {z, z, o}, {o, -alpha, z}, {o, z, o}, {z, o, o}};
    return MultiArrangement<K>(3, std::move(forms), std::vector<int>(6, 1));
}

template <class F, class K = typename F::Scalar>
MultiArrangement<K> x3_multi(const F& field, const K& alpha, const std::vector<int>& m) {
    if (m.size() != 6) throw invalid_input("X3 multiplicity vector must have 6 entries");
    return x3_arrangement(field, alpha).with_mult(m);
}

// ---------------------------------------------------------------------------
// Intersection lattice

struct Flat {
    std::vector<int> hyps;  // sorted hyperplane indices whose forms vanish on the flat
    int rank = 0;
    long long mu = 0;
};

struct Lattice {
    int arr_rank = 0;
    std::vector<Flat> flats;  // sorted by (rank, hyps); excludes the empty flat

    std::vector<const Flat*> of_rank(int r) const {
        std::vector<const Flat*> out;
        for (const auto& f : flats)
            if (f.rank == r) out.push_back(&f);
        return out;
    }
};

template <class K>
Lattice lattice(const MultiArrangement<K>& a) {
    const int n = a.size();
    std::map<std::vector<int>, int> seen;  // closure -> rank
    std::vector<std::pair<std::vector<int>, RowSpace<K>>> frontier;

    auto closure_of = [&](const RowSpace<K>& rs) {
        std::vector<int> c;
        for (int j = 0; j < n; ++j)
            if (rs.contains(a.form(j))) c.push_back(j);
        return c;
    };

    for (int i = 0; i < n; ++i) {
        RowSpace<K> rs;
        rs.add(a.form(i));
        auto c = closure_of(rs);
        if (seen.emplace(c, 1).second) frontier.emplace_back(c, std::move(rs));
    }
    int r = 1;
    while (!frontier.empty()) {
        std::vector<std::pair<std::vector<int>, RowSpace<K>>> next;
        for (auto& [cl, rs] : frontier) {
            for (int j = 0; j < n; ++j) {
                if (std::binary_search(cl.begin(), cl.end(), j)) continue;
                RowSpace<K> rs2 = rs;
                rs2.add(a.form(j));
                auto c2 = closure_of(rs2);
                if (seen.emplace(c2, r + 1).second) next.emplace_back(c2, std::move(rs2));
            }
        }
        frontier = std::move(next);
        ++r;
    }

    Lattice lat;
    for (auto& [cl, rk] : seen) {
        Flat f;
        f.hyps = cl;
        f.rank = rk;
        lat.flats.push_back(std::move(f));
        lat.arr_rank = std::max(lat.arr_rank, rk);
    }
    std::sort(lat.flats.begin(), lat.flats.end(), [](const Flat& x, const Flat& y) {
        return std::tie(x.rank, x.hyps) < std::tie(y.rank, y.hyps);
    });
    // Mobius recursion down the poset (reverse inclusion; 0^ has mu = 1)
    for (size_t i = 0; i < lat.flats.size(); ++i) {
        long long s = 1;
        for (size_t j = 0; j < i; ++j) {
            const auto& small = lat.flats[j].hyps;
            const auto& big = lat.flats[i].hyps;
            if (small.size() < big.size() &&
                std::includes(big.begin(), big.end(), small.begin(), small.end()))
                s += lat.flats[j].mu;
        }
        lat.flats[i].mu = -s;
    }
    return lat;
}

// generators alpha_H^{m(H)} of the ideal attached to a flat
template <class K>
std::vector<Poly<K>> flat_ideal(const MultiArrangement<K>& a, const Flat& x) {
    std::vector<Poly<K>> gens;
    for (int h : x.hyps) gens.push_back(pow(a.form_poly(h), a.mult(h)));
    return gens;
}

// ---------------------------------------------------------------------------
// Characteristic polynomial (integer coefficients via the Mobius function)

struct CharPoly {
    std::vector<long long> coeffs;  // coeffs[k] multiplies t^k
    std::optional<std::vector<long long>> roots;  // ascending, when chi splits over Z

    long long eval(long long t) const {
        long long v = 0;
        for (size_t k = coeffs.size(); k-- > 0;) v = v * t + coeffs[k];
        return v;
    }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    std::string str() const {
        std::string s;
        for (size_t k = coeffs.size(); k-- > 0;) {
            long long c = coeffs[k];
            if (c == 0) continue;
            std::string body = k == 0 ? "" : (k == 1 ? "t" : "t^" + std::to_string(k));
            std::string mag = std::to_string(std::abs(c));
            std::string piece = body.empty() ? mag : (std::abs(c) == 1 ? body : mag + "*" + body);
            if (s.empty())
                s = (c < 0 ? "-" : "") + piece;
            else
                s += (c < 0 ? " - " : " + ") + piece;
        }
        return s.empty() ? "0" : s;
    }
};

// full integer-root factorization of a monic integer polynomial, by divisor
// search on the constant term
inline std::optional<std::vector<long long>> integer_roots(std::vector<long long> c) {
    std::vector<long long> roots;
    while (c.size() > 1) {
        long long c0 = c[0];
        std::optional<long long> found;
        auto try_root = [&](long long r) {
            if (found) return;
            long long v = 0;
            for (size_t k = c.size(); k-- > 0;) v = v * r + c[k];
            if (v == 0) found = r;
        };
        if (c0 == 0) {
            try_root(0);
        } else {
            std::vector<long long> divs;
            for (long long d = 1; d * d <= std::abs(c0); ++d)
                if (c0 % d == 0) {
                    divs.push_back(d);
                    divs.push_back(std::abs(c0) / d);
                }
            std::sort(divs.begin(), divs.end());
            for (long long d : divs) {
                try_root(d);
                try_root(-d);
            }
        }
        if (!found) return std::nullopt;
        // synthetic division by (t - r)
        std::vector<long long> q(c.size() - 1);
        long long carry = c.back();
        for (size_t k = c.size() - 1; k-- > 0;) {
            q[k] = carry;
            carry = c[k] + carry * *found;
        }
        roots.push_back(*found);
        c = std::move(q);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

template <class K>
CharPoly char_poly(const MultiArrangement<K>& a) {
    Lattice lat = lattice(a);
    CharPoly chi;
    chi.coeffs.assign(a.nvars() + 1, 0);
    chi.coeffs[a.nvars()] = 1;  // the empty flat
    for (const auto& f : lat.flats) chi.coeffs[a.nvars() - f.rank] += f.mu;
    chi.roots = integer_roots(chi.coeffs);
    return chi;
}

// ---------------------------------------------------------------------------
// Ziegler multi-restriction of a simple arrangement.  Coordinates on H are
// the declared variables other than the pivot variable of alpha_H.

template <class K>
MultiArrangement<K> ziegler_restriction(const MultiArrangement<K>& a, int h) {
    if (h < 0 || h >= a.size()) throw invalid_input("hyperplane index out of range");
    if (!a.is_simple()) throw invalid_input("Ziegler restriction needs a simple arrangement");
    const auto& ah = a.form(h);
    int pivot = -1;
    for (int j = 0; j < a.nvars(); ++j)
        if (!ah[j].is_zero()) { pivot = j; break; }
    K pinv = ah[pivot].inv();

    std::vector<std::vector<K>> restricted;
    std::vector<int> mult;
    for (int i = 0; i < a.size(); ++i) {
        if (i == h) continue;
        const auto& f = a.form(i);
        K c = f[pivot] * pinv;
        std::vector<K> v;
        for (int j = 0; j < a.nvars(); ++j) {
            if (j == pivot) continue;
            v.push_back(f[j] - c * ah[j]);
        }
        // normalize leading coefficient to 1
        int lead = -1;
        for (size_t j = 0; j < v.size(); ++j)
            if (!v[j].is_zero()) { lead = static_cast<int>(j); break; }
        X3DER_CHECK(lead >= 0, "restricted form vanished (duplicate hyperplane)");
        K linv = v[lead].inv();
        for (auto& x : v) x = x * linv;

        bool merged = false;
        for (size_t k = 0; k < restricted.size(); ++k)
            if (restricted[k] == v) {
                ++mult[k];
                merged = true;
                break;
            }
        if (!merged) {
            restricted.push_back(std::move(v));
            mult.push_back(1);
        }
    }
    return MultiArrangement<K>(a.nvars() - 1, std::move(restricted), std::move(mult));
}

// rewrite the forms of a non-essential arrangement in a basis of their span
template <class K>
MultiArrangement<K> essentialize(const MultiArrangement<K>& a) {
    RowSpace<K> rs;
    for (int i = 0; i < a.size(); ++i) rs.add(a.form(i));
    const int r = rs.dim();
    std::vector<std::vector<K>> forms;
    for (int i = 0; i < a.size(); ++i) {
        std::vector<K> v = a.form(i);
        std::vector<K> coords(r);
        for (int k = 0; k < r; ++k) {
            coords[k] = v[rs.piv[k]];
            if (coords[k].is_zero()) continue;
            for (size_t j = 0; j < v.size(); ++j) v[j] = v[j] - coords[k] * rs.rows[k][j];
        }
        for (const auto& c : v)
            X3DER_CHECK(c.is_zero(), "form outside the span of the arrangement");
        forms.push_back(std::move(coords));
    }
    return MultiArrangement<K>(r, std::move(forms), a.mults());
}

// ---------------------------------------------------------------------------
// Moduli recognition: identify a simple 6-plane rank-3 arrangement as
// X3(alpha) and return the role of each hyperplane.  order[i] is the input
// index playing the canonical role H_{i+1}.

template <class K>
struct X3Recognition {
    K alpha;
    std::array<int, 6> order;
};

template <class K>
std::optional<X3Recognition<K>> recognize_x3(const MultiArrangement<K>& a) {
    if (a.size() != 6 || a.nvars() != 3 || !a.is_simple() || a.rank() != 3) return std::nullopt;
    Lattice lat = lattice(a);
    std::vector<std::vector<int>> triples, doubles;
    for (const auto& f : lat.flats) {
        if (f.rank != 2) continue;
        if (f.hyps.size() == 3) triples.push_back(f.hyps);
        else if (f.hyps.size() == 2) doubles.push_back(f.hyps);
        else return std::nullopt;
    }
    if (triples.size() != 3 || doubles.size() != 6) return std::nullopt;

    auto common = [](const std::vector<int>& u, const std::vector<int>& v) -> std::optional<int> {
        std::vector<int> c;
        std::set_intersection(u.begin(), u.end(), v.begin(), v.end(), std::back_inserter(c));
        if (c.size() != 1) return std::nullopt;
        return c[0];
    };
    auto h1 = common(triples[0], triples[1]);
    auto h2 = common(triples[0], triples[2]);
    auto h3 = common(triples[1], triples[2]);
    if (!h1 || !h2 || !h3) return std::nullopt;
    auto third = [](const std::vector<int>& t, int u, int v) -> int {
        for (int x : t)
            if (x != u && x != v) return x;
        return -1;
    };
    int h4 = third(triples[0], *h1, *h2);
    int h5 = third(triples[1], *h1, *h3);
    int h6 = third(triples[2], *h2, *h3);
    std::array<int, 6> order = {*h1, *h2, *h3, h4, h5, h6};

    // coordinates of the remaining forms in the basis (a_{h1}, a_{h2}, a_{h3})
    Mat<K> bt(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) bt(i, j) = a.form(order[j])[i];
    auto coords = [&](int idx) {
        auto s = solve_unique(bt, a.form(idx));
        X3DER_CHECK(s.has_value(), "X3 frame is degenerate");
        return *s;
    };
    auto g4 = coords(h4), g5 = coords(h5), g6 = coords(h6);
    if (!g6[0].is_zero() || !g4[2].is_zero() || !g5[1].is_zero()) return std::nullopt;
    for (const K& c : {g4[0], g4[1], g5[0], g5[2], g6[1], g6[2]})
        if (c.is_zero()) return std::nullopt;

    // normalize diagonal scalings so H5 -> x + z, H6 -> y + z; alpha falls out
    K alpha = -(g4[1] * g5[0] * g6[2]) * (g4[0] * g6[1] * g5[2]).inv();
    if (alpha.is_zero() || alpha.is_one()) return std::nullopt;
    return X3Recognition<K>{alpha, order};
}

}  // namespace x3der
