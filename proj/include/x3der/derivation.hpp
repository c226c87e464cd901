#pragma once

// Graded computation of the derivation module D(A,m): degree components,
// Hilbert function, minimal generators, Saito certification, and the
// brute-force freeness oracle.
//
// A derivation theta = sum P_j d/dx_j lies in D(A,m) iff alpha_i^{m_i}
// divides theta(alpha_i) for every form alpha_i.  Per form, a linear change
// of coordinates sends alpha_i to the first variable; divisibility then
// says every monomial of the transformed theta(alpha_i) has first-variable
// exponent >= m_i, a linear condition on the coefficients of the P_j.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "x3der/arrangement.hpp"
#include "x3der/field.hpp"
#include "x3der/linalg.hpp"
#include "x3der/poly.hpp"

namespace x3der {

template <class K>
struct Derivation {
    std::vector<Poly<K>> coeffs;  // one coefficient polynomial per variable

    int nvars() const { return static_cast<int>(coeffs.size()); }
    bool is_zero() const {
        return std::all_of(coeffs.begin(), coeffs.end(), [](const Poly<K>& p) { return p.is_zero(); });
    }
    // common homogeneous degree (in the polynomial-degree convention)
    int degree() const {
        int d = -1;
        for (const auto& p : coeffs)
            if (!p.is_zero()) d = std::max(d, p.degree());
        return d;
    }
    Poly<K> apply(const std::vector<K>& form) const {
        Poly<K> r(nvars());
        for (int j = 0; j < nvars(); ++j)
            if (!form[j].is_zero()) r += coeffs[j] * form[j];
        return r;
    }
    bool operator==(const Derivation&) const = default;
};

namespace detail {

// index of a monomial inside a descending graded-lex basis
inline int mono_index(const std::vector<Monomial>& basis, const Monomial& m) {
    auto it = std::lower_bound(basis.begin(), basis.end(), m,
                               [](const Monomial& a, const Monomial& b) { return grlex_greater(a, b); });
    X3DER_CHECK(it != basis.end() && *it == m, "monomial outside basis");
    return static_cast<int>(it - basis.begin());
}

template <class K>
std::optional<int> single_variable_index(const std::vector<K>& form) {
    int idx = -1;
    for (size_t j = 0; j < form.size(); ++j) {
        if (form[j].is_zero()) continue;
        if (idx >= 0) return std::nullopt;
        idx = static_cast<int>(j);
    }
    return idx;
}

// Coordinate frame for the degree-d piece: per unknown block P_v, the
// monomials that survive the conditions of single-variable forms (those
// conditions kill coefficients outright).
template <class K>
struct DegreeFrame {
    int nvars = 0;
    int degree = 0;
    std::vector<Monomial> basis;
    std::vector<std::vector<int>> allowed;      // per block, indices into basis
    std::vector<std::vector<int>> basis_to_col; // per block, basis index -> column or -1
    std::vector<int> col_offset;
    std::vector<int> general_forms;             // forms needing constraint rows
    int cols = 0;
};

template <class K>
DegreeFrame<K> build_frame(const MultiArrangement<K>& a, int d) {
    const int nv = a.nvars();
    DegreeFrame<K> fr;
    fr.nvars = nv;
    fr.degree = d;
    fr.basis = mono_basis(nv, d);
    std::vector<int> var_mult(nv, 0);
    for (int i = 0; i < a.size(); ++i) {
        auto v = single_variable_index(a.form(i));
        if (v)
            var_mult[*v] = std::max(var_mult[*v], a.mult(i));
        else
            fr.general_forms.push_back(i);
    }
    fr.allowed.resize(nv);
    fr.basis_to_col.assign(nv, std::vector<int>(fr.basis.size(), -1));
    fr.col_offset.assign(nv + 1, 0);
    for (int v = 0; v < nv; ++v) {
        for (size_t f = 0; f < fr.basis.size(); ++f)
            if (fr.basis[f].e[v] >= var_mult[v]) {
                fr.basis_to_col[v][f] = fr.col_offset[v] + static_cast<int>(fr.allowed[v].size());
                fr.allowed[v].push_back(static_cast<int>(f));
            }
        fr.col_offset[v + 1] = fr.col_offset[v] + static_cast<int>(fr.allowed[v].size());
    }
    fr.cols = fr.col_offset[nv];
    return fr;
}

template <class K>
Derivation<K> frame_devectorize(const DegreeFrame<K>& fr, const std::vector<K>& vec) {
    Derivation<K> th;
    th.coeffs.assign(fr.nvars, Poly<K>(fr.nvars));
    for (int v = 0; v < fr.nvars; ++v)
        for (size_t li = 0; li < fr.allowed[v].size(); ++li) {
            const K& c = vec[fr.col_offset[v] + li];
            if (!c.is_zero())
                th.coeffs[v] += Poly<K>::monomial(fr.nvars, fr.basis[fr.allowed[v][li]], c);
        }
    return th;
}

// vectorize a member of D(A,m)_d; members are supported on allowed monomials
template <class K>
std::vector<K> frame_vectorize(const DegreeFrame<K>& fr, const Derivation<K>& th) {
    std::vector<K> vec(fr.cols);
    for (int v = 0; v < fr.nvars; ++v)
        for (const auto& t : th.coeffs[v].terms()) {
            int col = fr.basis_to_col[v][mono_index(fr.basis, t.m)];
            X3DER_CHECK(col >= 0, "derivation not supported on the frame");
            vec[col] = t.c;
        }
    return vec;
}

}  // namespace detail

// Echelon basis of the degree-d graded piece of D(A,m).  Canonical: the
// result is the reduced-echelon kernel basis in graded-lex coordinate order
// (coefficients of P_1 first, then P_2, ...).
template <class F, class K = typename F::Scalar>
std::vector<std::vector<K>> degree_component_vectors(const F& field, const MultiArrangement<K>& a,
                                                     const detail::DegreeFrame<K>& fr) {
    const int nv = a.nvars();
    const auto& basis = fr.basis;
    const auto& allowed = fr.allowed;
    const auto& col_offset = fr.col_offset;
    const auto& general_forms = fr.general_forms;
    const int cols = fr.cols;
    if (cols == 0) return {};

    // constraint rows from the remaining forms, via the substitution that
    // sends the form to the first variable
    struct RowBlock {
        std::map<Monomial, int, GrlexGreater> row_of;
    };
    std::vector<RowBlock> blocks(general_forms.size());
    int rows = 0;
    for (size_t gi = 0; gi < general_forms.size(); ++gi) {
        int i = general_forms[gi];
        for (const auto& m : basis)
            if (m.e[0] < a.mult(i)) blocks[gi].row_of.emplace(m, rows++);
    }

    Mat<K> cons(rows, cols);
    for (size_t gi = 0; gi < general_forms.size(); ++gi) {
        const int i = general_forms[gi];
        const auto& form = a.form(i);
        int pivot = -1;
        for (int j = 0; j < nv; ++j)
            if (!form[j].is_zero()) { pivot = j; break; }
        Mat<K> v(nv, nv);
        for (int j = 0; j < nv; ++j) v(0, j) = form[j];
        int r = 1;
        for (int j = 0; j < nv; ++j) {
            if (j == pivot) continue;
            v(r, j) = field.one();
            ++r;
        }
        Mat<K> vinv = inverse_matrix(v);
        std::vector<std::vector<K>> vinv_rows(nv, std::vector<K>(nv));
        for (int rr = 0; rr < nv; ++rr)
            for (int cc = 0; cc < nv; ++cc) vinv_rows[rr][cc] = vinv(rr, cc);

        std::map<Monomial, Poly<K>, GrlexGreater> image_cache;
        auto image_of = [&](const Monomial& m) -> const Poly<K>& {
            auto it = image_cache.find(m);
            if (it != image_cache.end()) return it->second;
            Poly<K> img = substitute_linear(Poly<K>::monomial(nv, m, field.one()), vinv_rows);
            return image_cache.emplace(m, std::move(img)).first->second;
        };
        for (int vblk = 0; vblk < nv; ++vblk) {
            const K& coeff = form[vblk];
            if (coeff.is_zero()) continue;
            for (size_t li = 0; li < allowed[vblk].size(); ++li) {
                const Monomial& src = basis[allowed[vblk][li]];
                const Poly<K>& img = image_of(src);
                const int col = col_offset[vblk] + static_cast<int>(li);
                for (const auto& t : img.terms()) {
                    if (t.m.e[0] >= a.mult(i)) continue;
                    int row = blocks[gi].row_of.at(t.m);
                    cons(row, col) += coeff * t.c;
                }
            }
        }
    }

    return kernel_basis(field, cons);
}

template <class F, class K = typename F::Scalar>
std::vector<Derivation<K>> degree_component(const F& field, const MultiArrangement<K>& a, int d) {
    if (d < 0) throw invalid_input("negative degree");
    auto fr = detail::build_frame(a, d);
    auto kernel = degree_component_vectors(field, a, fr);
    std::vector<Derivation<K>> out;
    out.reserve(kernel.size());
    for (const auto& vec : kernel) out.push_back(detail::frame_devectorize(fr, vec));
    return out;
}

// divisibility membership test, independent of the kernel route above
template <class K>
bool is_member(const MultiArrangement<K>& a, const Derivation<K>& th) {
    for (int i = 0; i < a.size(); ++i)
        if (!divisible_by_power(th.apply(a.form(i)), a.form_poly(i), a.mult(i))) return false;
    return true;
}

template <class F, class K = typename F::Scalar>
std::vector<long long> hilbert_function(const F& field, const MultiArrangement<K>& a, int dmax) {
    std::vector<long long> dims;
    for (int d = 0; d <= dmax; ++d)
        dims.push_back(static_cast<long long>(degree_component(field, a, d).size()));
    return dims;
}

// Hilbert function of a free module with the given exponents
inline std::vector<long long> free_module_hilbert(int nvars, const std::vector<int>& exps, int dmax) {
    std::vector<long long> dims(dmax + 1, 0);
    for (int d = 0; d <= dmax; ++d)
        for (int e : exps) dims[d] += dim_homog(nvars, d - e);
    return dims;
}

template <class K>
struct GradedGenerator {
    int degree;
    Derivation<K> theta;
};

namespace detail {

// One degree layer of the minimal-generator recursion.  The module piece at
// degree d equals S_1 * D_{d-1} plus the new generators, so it suffices to
// complete the span of the shifted previous layer inside D_d.  Completion is
// read off a single reduced echelon form: its rows with pivots outside the
// shifted span are the canonical new generators.
template <class F, class K = typename F::Scalar>
struct GeneratorScan {
    const F& field;
    const MultiArrangement<K>& a;
    int degree = -1;
    std::vector<Derivation<K>> layer;  // basis of D_degree

    GeneratorScan(const F& f, const MultiArrangement<K>& arr) : field(f), a(arr) {}

    std::vector<GradedGenerator<K>> step() {
        const int d = ++degree;
        const int nv = a.nvars();
        auto fr = build_frame(a, d);
        auto kernel = degree_component_vectors(field, a, fr);
        std::vector<GradedGenerator<K>> out;
        if (fr.cols == 0 || kernel.empty()) {
            layer.clear();
            return out;
        }
        std::vector<std::vector<K>> shifted;
        for (const auto& th : layer)
            for (int v = 0; v < nv; ++v) {
                Derivation<K> sh;
                sh.coeffs.reserve(nv);
                Poly<K> var = Poly<K>::variable(nv, v, field.one());
                for (const auto& p : th.coeffs) sh.coeffs.push_back(p * var);
                shifted.push_back(frame_vectorize(fr, sh));
            }
        std::vector<Derivation<K>> cur;
        cur.reserve(kernel.size());
        for (const auto& vec : kernel) cur.push_back(frame_devectorize(fr, vec));

        size_t below_rank = 0;
        std::vector<bool> below_pivot(fr.cols, false);
        if (!shifted.empty()) {
            auto below = rref(Mat<K>::from_rows(shifted));
            below_rank = below.pivots.size();
            for (int c : below.pivots) below_pivot[c] = true;
        }
        if (kernel.size() > below_rank) {
            std::vector<std::vector<K>> all = std::move(shifted);
            all.insert(all.end(), kernel.begin(), kernel.end());
            auto full = rref(Mat<K>::from_rows(all));
            for (size_t i = 0; i < full.pivots.size(); ++i)
                if (!below_pivot[full.pivots[i]])
                    out.push_back({d, frame_devectorize(fr, full.mat.row(static_cast<int>(i)))});
        }
        layer = std::move(cur);
        return out;
    }
};

}  // namespace detail

// Minimal generators in degrees <= dmax, chosen as the echelon completion of
// S_1 * D_{d-1} inside D_d (deterministic in graded-lex coefficient order).
template <class F, class K = typename F::Scalar>
std::vector<GradedGenerator<K>> minimal_generators(const F& field, const MultiArrangement<K>& a,
                                                   int dmax) {
    detail::GeneratorScan<F, K> scan(field, a);
    std::vector<GradedGenerator<K>> gens;
    for (int d = 0; d <= dmax; ++d)
        for (auto& g : scan.step()) gens.push_back(std::move(g));
    return gens;
}

// ---------------------------------------------------------------------------
// Saito certification

template <class K>
struct SaitoOutcome {
    bool ok = false;
    K scalar;      // det = scalar * Q(A,m) when ok
    Poly<K> det;
};

template <class F, class K = typename F::Scalar>
Mat<Poly<K>> coefficient_matrix(const F&, const std::vector<Derivation<K>>& ths) {
    const int n = static_cast<int>(ths.size());
    Mat<Poly<K>> m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = ths[i].coeffs[j];
    return m;
}

// det of the candidate coefficient matrix against Q(A,m); candidates must be
// validated members, so a failure verdict is a genuine Saito failure
template <class F, class K = typename F::Scalar>
SaitoOutcome<K> saito_check(const F& field, const MultiArrangement<K>& a,
                            const std::vector<Derivation<K>>& cands) {
    if (static_cast<int>(cands.size()) != a.nvars())
        throw invalid_input("Saito check needs exactly one candidate per variable");
    for (const auto& th : cands)
        if (!is_member(a, th))
            throw membership_error("candidate derivation is not in D(A,m)");
    SaitoOutcome<K> out;
    out.det = det(coefficient_matrix(field, cands));
    if (out.det.is_zero()) return out;
    Poly<K> q = a.defining_poly();
    K k = out.det.leading().c * q.leading().c.inv();
    if (out.det == q * k) {
        out.ok = true;
        out.scalar = k;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Brute-force freeness oracle

enum class Freeness { Free, NotFree, UnknownUpToBound };

inline std::string freeness_str(Freeness f) {
    switch (f) {
        case Freeness::Free: return "Free";
        case Freeness::NotFree: return "NotFree";
        default: return "UnknownUpToBound";
    }
}

template <class K>
struct FreenessVerdict {
    Freeness status = Freeness::UnknownUpToBound;
    std::vector<int> exponents;              // ascending, when Free
    std::optional<K> saito_scalar;           // oracle certificate
    std::vector<Derivation<K>> basis;        // oracle certificate
    std::string witness;
    std::optional<std::array<int, 3>> minor_cols;  // homological witness
    std::optional<K> minor_value;
};

// Scans minimal generators up to degree |m|.  If a 3-subset with degree sum
// |m| passes the Saito check, the module is free with that basis; if more
// than 3 generators show up and no subset certifies, it is not free; the
// bound leaves a third honest verdict (UnknownUpToBound), never silently
// coerced to a definite one.
//
// Degree bound |m|: if the module is free, Saito forces the exponent sum to
// be |m|, and every exponent is >= 1 (an essential arrangement with all
// m_i >= 1 has no degree-0 derivations), so each basis element appears by
// degree |m| - 2; the bound |m| gives slack.
//
// The scan stops as soon as a fourth minimal generator appears: a Saito
// triple would make the module free with exactly three minimal generators,
// so once four exist no later subset can certify.
template <class F, class K = typename F::Scalar>
FreenessVerdict<K> decide_free_bruteforce(const F& field, const MultiArrangement<K>& a) {
    if (a.nvars() != 3 || a.rank() != 3)
        throw invalid_input("the brute-force oracle handles essential rank-3 arrangements");
    const int bound = a.weight();
    detail::GeneratorScan<F, K> scan(field, a);
    std::vector<GradedGenerator<K>> gens;

    FreenessVerdict<K> v;
    for (int d = 0; d <= bound; ++d) {
        auto fresh = scan.step();
        if (fresh.empty()) continue;
        for (auto& g : fresh) gens.push_back(std::move(g));
        const int n = static_cast<int>(gens.size());
        if (n > 3) {
            v.status = Freeness::NotFree;
            v.witness = std::to_string(n) + " minimal generators in degrees <= " + std::to_string(d) +
                        ", no Saito-certified triple";
            return v;
        }
        if (n == 3 && gens[0].degree + gens[1].degree + gens[2].degree == bound) {
            auto outcome = saito_check(field, a, {gens[0].theta, gens[1].theta, gens[2].theta});
            if (outcome.ok) {
                v.status = Freeness::Free;
                v.exponents = {gens[0].degree, gens[1].degree, gens[2].degree};
                std::sort(v.exponents.begin(), v.exponents.end());
                v.saito_scalar = outcome.scalar;
                v.basis = {gens[0].theta, gens[1].theta, gens[2].theta};
                v.witness = "Saito certificate from minimal generators";
                return v;
            }
        }
    }
    v.status = Freeness::UnknownUpToBound;
    v.witness = "no certificate up to the degree bound " + std::to_string(bound);
    return v;
}

}  // namespace x3der
