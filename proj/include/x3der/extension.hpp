#pragma once

// Rank-4 free extensions of the X3 family.  An extension adds a hyperplane
// w = 0 whose Ziegler restriction is (X3(alpha), [n,n,n,1,1,1]); with alpha
// a root of unity of order m and n = m*t, the orbit construction below is
// free, verified through the combinatorial pipeline: restriction freeness
// (classification formula) plus local freeness along w = 0 (grid-line tests
// on the rank-3 localizations).

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "x3der/arrangement.hpp"
#include "x3der/derivation.hpp"
#include "x3der/field.hpp"
#include "x3der/freeness.hpp"
#include "x3der/restriction.hpp"

namespace x3der {

template <class K>
struct ExtensionSpec {
    K alpha;                  // root of unity, order m
    int t = 1;                // orbits per axis
    std::vector<K> constants; // orbit representatives A_1..A_t
};

template <class F, class K = typename F::Scalar>
int validated_order(const F& field, const ExtensionSpec<K>& spec) {
    if (spec.alpha.is_zero() || spec.alpha == field.one())
        throw degenerate_moduli("alpha in {0,1} collapses the moduli");
    const int m = multiplicative_order(field, spec.alpha);
    if (m == 0) throw invalid_input("alpha is not a root of unity; no free extension exists");
    if (spec.t < 1 || static_cast<int>(spec.constants.size()) != spec.t)
        throw invalid_input("extension spec needs t >= 1 orbit constants");
    std::vector<K> orbit;
    for (const auto& c : spec.constants) {
        if (c.is_zero()) throw invalid_input("orbit constants must be nonzero");
        K v = c;
        for (int j = 0; j < m; ++j) {
            for (const auto& seen : orbit)
                if (seen == v) throw invalid_input("orbit collision among the constants");
            orbit.push_back(v);
            v = v * spec.alpha;
        }
    }
    return m;
}

// the 3mt + 4 hyperplanes of the orbit extension, in construction order:
// x-, y-, z-blocks over the alpha-orbits, then x - alpha y, x + z, y + z, w
template <class F, class K = typename F::Scalar>
MultiArrangement<K> build_extension(const F& field, const ExtensionSpec<K>& spec) {
    const int m = validated_order(field, spec);
    const K o = field.one(), z = field.zero();
    std::vector<std::vector<K>> forms;
    auto blocks = [&](int axis, bool plus) {
        for (const auto& c : spec.constants) {
            K v = c;
            for (int j = 0; j < m; ++j) {
                std::vector<K> f = {z, z, z, plus ? v : -v};
                f[axis] = o;
                forms.push_back(std::move(f));
                v = v * spec.alpha;
            }
        }
    };
    blocks(0, false);
    blocks(1, false);
    blocks(2, true);
    forms.push_back({o, -spec.alpha, z, z});
    forms.push_back({o, z, o, z});
    forms.push_back({z, o, o, z});
    forms.push_back({z, z, z, o});
    const size_t count = forms.size();
    return MultiArrangement<K>(4, std::move(forms), std::vector<int>(count, 1));
}

// ---------------------------------------------------------------------------
// Local freeness along the restricting hyperplane

template <class K>
struct LocalCheck {
    std::vector<int> flat;  // hyperplane indices of the rank-3 flat
    bool grid_route = false;
    bool free = false;
};

namespace detail {

// try to read a rank-3 localization as the grid-plus-line family relative
// to the hyperplane h; the signature is a 3-point Ziegler restriction with
// multiplicities {n, n, 1}
template <class F, class K = typename F::Scalar>
std::optional<GridLineSpec<K>> detect_grid(const F& field, const MultiArrangement<K>& a, int h) {
    auto rest = ziegler_restriction(a, h);
    if (rest.size() != 3) return std::nullopt;

    // group the hyperplanes (other than h) by their restriction fiber
    const auto& ah = a.form(h);
    int pivot = -1;
    for (int j = 0; j < a.nvars(); ++j)
        if (!ah[j].is_zero()) { pivot = j; break; }
    K pinv = ah[pivot].inv();
    auto fiber_form = [&](int i) {
        std::vector<K> v;
        K c = a.form(i)[pivot] * pinv;
        for (int j = 0; j < a.nvars(); ++j) {
            if (j == pivot) continue;
            v.push_back(a.form(i)[j] - c * ah[j]);
        }
        int lead = -1;
        for (size_t j = 0; j < v.size(); ++j)
            if (!v[j].is_zero()) { lead = static_cast<int>(j); break; }
        K linv = v[lead].inv();
        for (auto& x : v) x = x * linv;
        return v;
    };
    std::vector<std::vector<K>> fibers;
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < a.size(); ++i) {
        if (i == h) continue;
        auto f = fiber_form(i);
        bool merged = false;
        for (size_t g = 0; g < fibers.size(); ++g)
            if (fibers[g] == f) {
                groups[g].push_back(i);
                merged = true;
                break;
            }
        if (!merged) {
            fibers.push_back(std::move(f));
            groups.push_back({i});
        }
    }
    if (groups.size() != 3) return std::nullopt;
    std::vector<int> sizes = {static_cast<int>(groups[0].size()), static_cast<int>(groups[1].size()),
                              static_cast<int>(groups[2].size())};
    int line_group = -1, fx = -1, fy = -1;
    for (int g = 0; g < 3; ++g)
        if (sizes[g] == 1 && line_group < 0) line_group = g;
    if (line_group < 0) return std::nullopt;
    for (int g = 0; g < 3; ++g)
        if (g != line_group) (fx < 0 ? fx : fy) = g;
    if (sizes[fx] != sizes[fy]) return std::nullopt;

    // coordinates: x' = first FX form, y' = first FY form, z' = form of h
    Mat<K> bt(a.nvars(), 3);
    for (int r = 0; r < a.nvars(); ++r) {
        bt(r, 0) = a.form(groups[fx][0])[r];
        bt(r, 1) = a.form(groups[fy][0])[r];
        bt(r, 2) = ah[r];
    }
    auto coords = [&](int i) { return solve_unique(bt, a.form(i)); };

    GridLineSpec<K> spec;
    for (int i : groups[fx]) {
        auto c = coords(i);
        if (!c || !(*c)[1].is_zero() || (*c)[0].is_zero()) return std::nullopt;
        spec.a.push_back(-((*c)[2] * (*c)[0].inv()));  // x' - a z'
    }
    for (int i : groups[fy]) {
        auto c = coords(i);
        if (!c || !(*c)[0].is_zero() || (*c)[1].is_zero()) return std::nullopt;
        spec.b.push_back(-((*c)[2] * (*c)[1].inv()));
    }
    {
        auto c = coords(groups[line_group][0]);
        if (!c || (*c)[0].is_zero() || (*c)[1].is_zero()) return std::nullopt;
        spec.A = (*c)[0];
        spec.B = (*c)[1];
        spec.C = (*c)[2];
    }
    (void)field;
    return spec;
}

}  // namespace detail

// freeness of every rank-3 localization A_X with X below the hyperplane h0;
// rank-2 localizations are always free and are skipped
template <class F, class K = typename F::Scalar>
std::vector<LocalCheck<K>> local_freeness_checks(const F& field, const MultiArrangement<K>& a,
                                                 int h0) {
    Lattice lat = lattice(a);
    std::vector<LocalCheck<K>> out;
    for (const auto& flat : lat.flats) {
        if (flat.rank != 3) continue;
        if (!std::binary_search(flat.hyps.begin(), flat.hyps.end(), h0)) continue;
        std::vector<std::vector<K>> forms;
        std::vector<int> mult;
        int h_local = -1;
        for (int i : flat.hyps) {
            if (i == h0) h_local = static_cast<int>(forms.size());
            forms.push_back(a.form(i));
            mult.push_back(1);
        }
        MultiArrangement<K> ax = essentialize(MultiArrangement<K>(a.nvars(), forms, mult));
        LocalCheck<K> check;
        check.flat = flat.hyps;
        if (auto grid = detail::detect_grid(field, ax, h_local)) {
            check.grid_route = true;
            check.free = grid_line_free(*grid);
        } else {
            check.grid_route = false;
            check.free = yoshinaga3_free(field, ax, h_local);
        }
        out.push_back(std::move(check));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Verification of an extension via Yoshinaga's criterion

template <class K>
struct ExtensionReport {
    bool ok = false;
    bool restriction_ok = false;
    std::optional<K> alpha;            // normalized moduli parameter of the restriction
    std::vector<int> restricted_mult;  // in canonical X3 order
    Freeness restriction_classified = Freeness::NotFree;
    bool simple_restriction_free = true;  // the forgotten-multiplicity restriction
    std::vector<LocalCheck<K>> locals;
    std::string failure;
};

template <class F, class K = typename F::Scalar>
ExtensionReport<K> verify_extension(const F& field, const MultiArrangement<K>& a, int h0) {
    if (h0 < 0 || h0 >= a.size()) throw invalid_input("hyperplane index out of range");
    if (a.nvars() != 4 || a.rank() != 4 || !a.is_simple())
        throw invalid_input("extension verification expects an essential simple rank-4 arrangement");
    ExtensionReport<K> rep;

    auto rest = ziegler_restriction(a, h0);
    if (rest.size() == 6) {
        if (auto rec = recognize_x3(rest.simple())) {
            rep.alpha = rec->alpha;
            rep.restricted_mult.resize(6);
            for (int i = 0; i < 6; ++i) rep.restricted_mult[i] = rest.mult(rec->order[i]);
            rep.restriction_classified = classify_predicted(field, rec->alpha, rep.restricted_mult);
            rep.restriction_ok = rep.restriction_classified == Freeness::Free;
            rep.simple_restriction_free = yoshinaga3_free(field, rest.simple(), 0);
        } else {
            rep.failure = "restriction does not carry the X3 lattice";
        }
    } else {
        rep.failure = "restriction has " + std::to_string(rest.size()) + " hyperplanes, expected 6";
    }
    if (!rep.restriction_ok && rep.failure.empty())
        rep.failure = "restricted multiplicity is not a free X3 multiplicity";

    rep.locals = local_freeness_checks(field, a, h0);
    bool locals_ok = true;
    for (const auto& c : rep.locals)
        if (!c.free) {
            locals_ok = false;
            if (rep.failure.empty()) {
                rep.failure = "localization at flat {";
                for (size_t i = 0; i < c.flat.size(); ++i)
                    rep.failure += (i ? "," : "") + std::to_string(c.flat[i]);
                rep.failure += "} is not free";
            }
        }
    rep.ok = rep.restriction_ok && locals_ok;
    return rep;
}

// ---------------------------------------------------------------------------
// Terao trace: the four combinatorial steps that decide freeness of an
// extension from lattice data alone

struct TraceStep {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct TeraoTrace {
    std::vector<TraceStep> steps;
    bool all_pass = false;
};

template <class F, class K = typename F::Scalar>
TeraoTrace terao_trace(const F& field, const MultiArrangement<K>& a, int h0) {
    TeraoTrace tr;
    auto rep = verify_extension(field, a, h0);

    TraceStep s1{"ziegler-multiplicity-shape", false, ""};
    int n = 0;
    if (rep.alpha && rep.restricted_mult.size() == 6) {
        const auto& m = rep.restricted_mult;
        bool shape = m[0] == m[1] && m[1] == m[2] && m[3] == 1 && m[4] == 1 && m[5] == 1;
        n = m[0];
        s1.pass = shape && n > 1;
        s1.detail = shape ? "restriction multiplicity [n,n,n,1,1,1] with n = " + std::to_string(n)
                          : "restriction multiplicity is not of the shape [n,n,n,1,1,1]";
    } else {
        s1.detail = rep.failure;
    }
    tr.steps.push_back(s1);

    TraceStep s2{"local-freeness-along-restriction", true, ""};
    int grid_count = 0;
    for (const auto& c : rep.locals) {
        if (c.grid_route) ++grid_count;
        if (!c.free) {
            s2.pass = false;
            s2.detail = "flat {";
            for (size_t i = 0; i < c.flat.size(); ++i) s2.detail += (i ? "," : "") + std::to_string(c.flat[i]);
            s2.detail += "} fails the grid-line matching";
        }
    }
    if (s2.pass)
        s2.detail = std::to_string(rep.locals.size()) + " rank-3 localizations free (" +
                    std::to_string(grid_count) + " via the grid-line test)";
    tr.steps.push_back(s2);

    TraceStep s3{"order-divides-n", false, ""};
    if (rep.alpha) {
        int ord = multiplicative_order(field, *rep.alpha);
        if (ord > 0 && n > 0 && n % ord == 0) {
            s3.pass = true;
            s3.detail = "n = " + std::to_string(n) + " = m*t with m = ord(alpha) = " +
                        std::to_string(ord) + ", t = " + std::to_string(n / ord);
        } else {
            s3.detail = ord == 0 ? "alpha is not a root of unity"
                                 : "ord(alpha) = " + std::to_string(ord) + " does not divide n = " +
                                       std::to_string(n);
        }
    } else {
        s3.detail = "no moduli parameter recognized";
    }
    tr.steps.push_back(s3);

    TraceStep s4{"yoshinaga-verdict", rep.ok, rep.ok ? "restriction free and locally free: extension is free"
                                                     : rep.failure};
    tr.steps.push_back(s4);

    tr.all_pass = s1.pass && s2.pass && s3.pass && s4.pass;
    return tr;
}

// ---------------------------------------------------------------------------
// Optional exact certification at rank 4 (the direct Saito route); degree
// bound |A|, intended for small arrangements over Q

template <class K>
struct Rank4Certificate {
    bool certified = false;
    std::vector<int> exponents;
    std::optional<K> saito_scalar;
    std::string note;
};

template <class F, class K = typename F::Scalar>
Rank4Certificate<K> saito_certify_rank4(const F& field, const MultiArrangement<K>& a) {
    if (a.nvars() != 4 || a.rank() != 4)
        throw invalid_input("rank-4 certification expects an essential rank-4 arrangement");
    Rank4Certificate<K> cert;
    const int bound = a.weight();
    detail::GeneratorScan<F, K> scan(field, a);
    std::vector<GradedGenerator<K>> gens;
    for (int d = 0; d <= bound; ++d) {
        auto fresh = scan.step();
        if (fresh.empty()) continue;
        for (auto& g : fresh) gens.push_back(std::move(g));
        if (gens.size() > 4) {
            cert.note = "more than four minimal generators; not free";
            return cert;
        }
        if (gens.size() == 4 &&
            gens[0].degree + gens[1].degree + gens[2].degree + gens[3].degree == bound) {
            auto outcome =
                saito_check(field, a, {gens[0].theta, gens[1].theta, gens[2].theta, gens[3].theta});
            if (outcome.ok) {
                cert.certified = true;
                cert.exponents = {gens[0].degree, gens[1].degree, gens[2].degree, gens[3].degree};
                std::sort(cert.exponents.begin(), cert.exponents.end());
                cert.saito_scalar = outcome.scalar;
                cert.note = "Saito certificate at rank 4";
                return cert;
            }
        }
    }
    cert.note = "no Saito certificate up to the degree bound " + std::to_string(bound);
    return cert;
}

// ---------------------------------------------------------------------------
// Translation normalization: kill the w-offsets of the three tilted forms
// (the frame forms are the ones supported on exactly two of x, y, z)

template <class F, class K = typename F::Scalar>
MultiArrangement<K> normalize_extension_translation(const F& field, const MultiArrangement<K>& a) {
    if (a.nvars() != 4) throw invalid_input("translation normalization expects 4 variables");
    int f_xy = -1, f_xz = -1, f_yz = -1;
    for (int i = 0; i < a.size(); ++i) {
        const auto& f = a.form(i);
        bool sx = !f[0].is_zero(), sy = !f[1].is_zero(), sz = !f[2].is_zero();
        if (sx && sy && !sz) f_xy = i;
        if (sx && !sy && sz) f_xz = i;
        if (!sx && sy && sz) f_yz = i;
    }
    if (f_xy < 0 || f_xz < 0 || f_yz < 0)
        throw invalid_input("arrangement does not carry the three tilted frame forms");
    // solve for the translation (x,y,z) += (u,v,s) w that zeroes the three
    // w-offsets; the system matrix is the triple-point relation frame
    auto row = [&](int i) {
        const auto& f = a.form(i);
        K inv = (!f[0].is_zero() ? f[0] : f[1]).inv();
        return std::vector<K>{f[0] * inv, f[1] * inv, f[2] * inv, f[3] * inv};
    };
    auto rxy = row(f_xy), rxz = row(f_xz), ryz = row(f_yz);
    Mat<K> sys(3, 3);
    std::vector<K> rhs(3);
    const std::vector<std::vector<K>*> rows = {&rxy, &rxz, &ryz};
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) sys(r, c) = (*rows[r])[c];
        rhs[r] = -(*rows[r])[3];
    }
    auto uvs = solve_unique(sys, rhs);
    if (!uvs) throw invalid_input("tilted frame forms do not determine a translation");
    Mat<K> t = Mat<K>::identity(4, field.one());
    t(0, 3) = (*uvs)[0];
    t(1, 3) = (*uvs)[1];
    t(2, 3) = (*uvs)[2];
    return transform(a, t);
}

}  // namespace x3der
