#pragma once

// Rank-2 multi-arrangements (points in P^1 with multiplicities) and the
// rank-3 freeness test built on them: chi must factor over Z as
// (t-1)(t-d1)(t-d2) and the Ziegler restriction must have exponents
// {d1, d2}.  Includes the grid-plus-line family, where freeness reduces to
// counting grid points on the line.

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "x3der/arrangement.hpp"
#include "x3der/derivation.hpp"
#include "x3der/field.hpp"

namespace x3der {

// Exponents of a rank-2 multi-arrangement.  These modules are always free
// with exponent sum |m|, so the smaller exponent is the first degree with a
// nonzero graded piece.
template <class F, class K = typename F::Scalar>
std::pair<int, int> p1_exponents(const F& field, const MultiArrangement<K>& p) {
    if (p.nvars() != 2) throw invalid_input("p1_exponents expects a rank-2 multi-arrangement");
    const int w = p.weight();
    for (int d = 0; d <= w / 2; ++d) {
        auto fr = detail::build_frame(p, d);
        if (!degree_component_vectors(field, p, fr).empty()) return {d, w - d};
    }
    throw internal_error("rank-2 derivation module without a generator below |m|/2");
}

// Yoshinaga's criterion for essential rank-3 simple arrangements, with the
// chosen hyperplane h.
template <class F, class K = typename F::Scalar>
bool yoshinaga3_free(const F& field, const MultiArrangement<K>& a, int h) {
    if (a.nvars() != 3 || a.rank() != 3)
        throw invalid_input("the rank-3 freeness test expects an essential rank-3 arrangement");
    if (!a.is_simple()) throw invalid_input("the rank-3 freeness test expects a simple arrangement");
    if (h < 0 || h >= a.size()) throw invalid_input("hyperplane index out of range");
    auto chi = char_poly(a);
    if (!chi.roots) return false;  // chi does not split over Z
    std::vector<long long> roots = *chi.roots;
    auto one = std::find(roots.begin(), roots.end(), 1);
    X3DER_CHECK(one != roots.end(), "central arrangement with chi(1) != 0");
    roots.erase(one);
    if (roots.size() != 2 || roots[0] < 0) return false;

    auto [e1, e2] = p1_exponents(field, ziegler_restriction(a, h));
    return roots[0] == e1 && roots[1] == e2;
}

// ---------------------------------------------------------------------------
// The grid-plus-line family: forms x - a_i z, y - b_j z, Ax + By + Cz, z.

template <class K>
struct GridLineSpec {
    std::vector<K> a;  // distinct
    std::vector<K> b;  // distinct
    K A, B, C;         // the line, A != 0 and B != 0

    int n() const { return static_cast<int>(a.size()); }
    void validate() const {
        if (a.empty() || a.size() != b.size())
            throw invalid_input("grid spec needs equally many distinct a- and b-values, at least one");
        if (A.is_zero() || B.is_zero())
            throw invalid_input("grid spec needs A != 0 and B != 0");
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = i + 1; j < a.size(); ++j) {
                if (a[i] == a[j]) throw invalid_input("grid a-values must be distinct");
                if (b[i] == b[j]) throw invalid_input("grid b-values must be distinct");
            }
    }
};

// number of grid points (a_i, b_j, 1) on the line
template <class K>
int grid_points_on_line(const GridLineSpec<K>& g) {
    int q = 0;
    for (const auto& ai : g.a)
        for (const auto& bj : g.b)
            if ((g.A * ai + g.B * bj + g.C).is_zero()) ++q;
    return q;
}

// Free iff the line meets the grid in n points; since A,B != 0 the line
// meets each row and column at most once, so q = n forces the matching.
template <class K>
bool grid_line_free(const GridLineSpec<K>& g) {
    g.validate();
    return grid_points_on_line(g) == g.n();
}

template <class F, class K = typename F::Scalar>
MultiArrangement<K> assemble_grid_arrangement(const F& field, const GridLineSpec<K>& g) {
    g.validate();
    const K o = field.one(), z = field.zero();
    std::vector<std::vector<K>> forms;
    for (const auto& ai : g.a) forms.push_back({o, z, -ai});
    for (const auto& bj : g.b) forms.push_back({z, o, -bj});
    forms.push_back({g.A, g.B, g.C});
    forms.push_back({z, z, o});
    const size_t count = forms.size();
    return MultiArrangement<K>(3, std::move(forms), std::vector<int>(count, 1));
}

// chi of the assembled family: (t-1)(t^2 - (2n+1)t + n^2 + 2n - q)
template <class K>
std::vector<long long> grid_line_char_poly(const GridLineSpec<K>& g) {
    const long long n = g.n(), q = grid_points_on_line(g);
    // expanded coefficients, ascending powers of t
    return {-(n * n + 2 * n - q), n * n + 4 * n + 1 - q, -(2 * n + 2), 1};
}

}  // namespace x3der
