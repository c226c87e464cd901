#pragma once

// Exact multivariate polynomials in at most four variables (x, y, z, w),
// kept in canonical graded-lexicographic form (leading term first).

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "x3der/field.hpp"

namespace x3der {

inline constexpr int kMaxVars = 4;

inline const std::array<std::string, 4>& default_var_names() {
    static const std::array<std::string, 4> names = {"x", "y", "z", "w"};
    return names;
}

struct Monomial {
    std::array<std::uint8_t, 4> e{0, 0, 0, 0};

    int degree() const { return e[0] + e[1] + e[2] + e[3]; }
    bool operator==(const Monomial&) const = default;

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        for (int i = 0; i < 4; ++i) r.e[i] = static_cast<std::uint8_t>(e[i] + o.e[i]);
        return r;
    }
    bool divides(const Monomial& o) const {
        for (int i = 0; i < 4; ++i)
            if (e[i] > o.e[i]) return false;
        return true;
    }
    Monomial operator/(const Monomial& o) const {
        Monomial r;
        for (int i = 0; i < 4; ++i) {
            if (o.e[i] > e[i]) throw internal_error("monomial division underflow");
            r.e[i] = static_cast<std::uint8_t>(e[i] - o.e[i]);
        }
        return r;
    }
};

// graded lexicographic with x > y > z > w
inline bool grlex_greater(const Monomial& a, const Monomial& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    return a.e > b.e;
}

struct GrlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return grlex_greater(a, b); }
};

inline long long binom(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// dim of the degree-d graded piece of a polynomial ring in nvars variables
inline long long dim_homog(int nvars, int d) {
    if (d < 0) return 0;
    return binom(d + nvars - 1, nvars - 1);
}

// all monomials of total degree d, descending graded-lex
inline std::vector<Monomial> mono_basis(int nvars, int d) {
    std::vector<Monomial> out;
    Monomial m;
    auto rec = [&](auto&& self, int var, int rem) -> void {
        if (var == nvars - 1) {
            m.e[var] = static_cast<std::uint8_t>(rem);
            out.push_back(m);
            m.e[var] = 0;
            return;
        }
        for (int e = rem; e >= 0; --e) {
            m.e[var] = static_cast<std::uint8_t>(e);
            self(self, var + 1, rem - e);
        }
        m.e[var] = 0;
    };
    if (nvars > 0 && d >= 0) rec(rec, 0, d);
    return out;
}

template <class K>
struct Term {
    Monomial m;
    K c;
};

template <class K>
class Poly {
  public:
    Poly() : nvars_(0) {}
    explicit Poly(int nvars) : nvars_(nvars) { check_nvars(nvars); }

    static Poly constant(int nvars, K c) {
        Poly p(nvars);
        if (!c.is_zero()) p.t_.push_back({Monomial{}, std::move(c)});
        return p;
    }
    static Poly monomial(int nvars, Monomial m, K c) {
        Poly p(nvars);
        if (!c.is_zero()) p.t_.push_back({m, std::move(c)});
        return p;
    }
    static Poly variable(int nvars, int i, K one) {
        if (i < 0 || i >= nvars || i >= kMaxVars) throw invalid_input("variable index out of range");
        Monomial m;
        m.e[i] = 1;
        return monomial(nvars, m, std::move(one));
    }
    // sum_i coeffs[i] * x_i
    static Poly linear_form(int nvars, const std::vector<K>& coeffs) {
        Poly p(nvars);
        for (int i = 0; i < nvars && i < kMaxVars; ++i) {
            if (!coeffs[i].is_zero()) {
                Monomial m;
                m.e[i] = 1;
                p.t_.push_back({m, coeffs[i]});
            }
        }
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return t_.empty(); }
    int degree() const { return t_.empty() ? -1 : t_.front().m.degree(); }
    bool is_homogeneous() const {
        return t_.empty() || t_.back().m.degree() == t_.front().m.degree();
    }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].m == Monomial{}); }

    const std::vector<Term<K>>& terms() const { return t_; }
    const Term<K>& leading() const {
        if (t_.empty()) throw internal_error("leading term of zero");
        return t_.front();
    }
    K coeff(const Monomial& m) const {
        auto it = std::lower_bound(t_.begin(), t_.end(), m, [](const Term<K>& t, const Monomial& mm) {
            return grlex_greater(t.m, mm);
        });
        if (it != t_.end() && it->m == m) return it->c;
        return K();
    }

    Poly operator-() const {
        Poly r(*this);
        for (auto& t : r.t_) t.c = -t.c;
        return r;
    }
    Poly operator+(const Poly& o) const {
        require_same(o);
        Poly r(nvars_);
        r.t_.reserve(t_.size() + o.t_.size());
        auto a = t_.begin(), b = o.t_.begin();
        while (a != t_.end() && b != o.t_.end()) {
            if (a->m == b->m) {
                K c = a->c + b->c;
                if (!c.is_zero()) r.t_.push_back({a->m, std::move(c)});
                ++a, ++b;
            } else if (grlex_greater(a->m, b->m)) {
                r.t_.push_back(*a++);
            } else {
                r.t_.push_back(*b++);
            }
        }
        r.t_.insert(r.t_.end(), a, t_.end());
        r.t_.insert(r.t_.end(), b, o.t_.end());
        return r;
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }
    Poly operator*(const Poly& o) const {
        require_same(o);
        std::map<Monomial, K, GrlexGreater> acc;
        for (const auto& a : t_)
            for (const auto& b : o.t_) {
                Monomial m = a.m * b.m;
                auto [it, fresh] = acc.try_emplace(m, K());
                it->second = fresh ? a.c * b.c : it->second + a.c * b.c;
            }
        Poly r(nvars_);
        for (auto& [m, c] : acc)
            if (!c.is_zero()) r.t_.push_back({m, std::move(c)});
        return r;
    }
    Poly operator*(const K& s) const {
        Poly r(nvars_);
        if (s.is_zero()) return r;
        r.t_.reserve(t_.size());
        for (const auto& t : t_) {
            K c = t.c * s;
            if (!c.is_zero()) r.t_.push_back({t.m, std::move(c)});
        }
        return r;
    }
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }

    bool operator==(const Poly& o) const {
        if (nvars_ != o.nvars_ || t_.size() != o.t_.size()) return false;
        for (size_t i = 0; i < t_.size(); ++i)
            if (!(t_[i].m == o.t_[i].m) || t_[i].c != o.t_[i].c) return false;
        return true;
    }
    bool operator!=(const Poly& o) const { return !(*this == o); }

  private:
    static void check_nvars(int nvars) {
        if (nvars < 1 || nvars > kMaxVars)
            throw invalid_input("variable count must be between 1 and 4");
    }
    void require_same(const Poly& o) const {
        if (nvars_ != o.nvars_)
            throw invalid_input("polynomials over different variable sets");
    }
    int nvars_;
    std::vector<Term<K>> t_;
};

template <class K>
Poly<K> pow(const Poly<K>& f, int k) {
    if (k < 0) throw invalid_input("negative polynomial power");
    if (k == 0) {
        // empty product; needs a unit from somewhere
        if (f.is_zero()) throw invalid_input("0^0 polynomial power");
        K one = f.leading().c * f.leading().c.inv();
        return Poly<K>::constant(f.nvars(), one);
    }
    Poly<K> r = f;
    for (int i = 1; i < k; ++i) r = r * f;
    return r;
}

// f composed with the change of variables x -> Tx, T given by rows
template <class K>
Poly<K> substitute_linear(const Poly<K>& f, const std::vector<std::vector<K>>& T) {
    int n = f.nvars();
    if (static_cast<int>(T.size()) != n)
        throw invalid_input("substitution matrix size mismatch");
    for (const auto& row : T)
        if (static_cast<int>(row.size()) != n)
            throw invalid_input("substitution matrix not square");
    // cofactor determinant, n <= 4
    auto det = [&](auto&& self, std::vector<int> rows, std::vector<int> cols) -> K {
        if (rows.size() == 1) return T[rows[0]][cols[0]];
        K acc;
        for (size_t j = 0; j < cols.size(); ++j) {
            std::vector<int> r2(rows.begin() + 1, rows.end());
            std::vector<int> c2;
            for (size_t jj = 0; jj < cols.size(); ++jj)
                if (jj != j) c2.push_back(cols[jj]);
            K sub = T[rows[0]][cols[j]] * self(self, r2, c2);
            acc = (j % 2 == 0) ? acc + sub : acc - sub;
        }
        return acc;
    };
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    if (det(det, idx, idx).is_zero())
        throw invalid_input("singular substitution matrix");

    std::vector<Poly<K>> image(n);
    for (int i = 0; i < n; ++i) image[i] = Poly<K>::linear_form(n, T[i]);

    // power cache per variable
    std::vector<std::vector<Poly<K>>> pw(n);
    auto power = [&](int i, int e) -> const Poly<K>& {
        auto& cache = pw[i];
        if (cache.empty()) cache.push_back(pow(image[i], 0));
        while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * image[i]);
        return cache[e];
    };

    Poly<K> out(n);
    bool unit_ok = !f.is_zero();
    Poly<K> unit = unit_ok ? Poly<K>::constant(n, f.leading().c * f.leading().c.inv()) : Poly<K>(n);
    for (const auto& t : f.terms()) {
        Poly<K> prod = unit;
        for (int i = 0; i < n; ++i)
            if (t.m.e[i] > 0) prod = prod * power(i, t.m.e[i]);
        out += prod * t.c;
    }
    return out;
}

// multivariate division by a single divisor; returns {quotient, remainder}
template <class K>
std::pair<Poly<K>, Poly<K>> divide(const Poly<K>& f, const Poly<K>& g) {
    if (g.is_zero()) throw invalid_input("division by the zero polynomial");
    Poly<K> q(f.nvars()), r(f.nvars()), rest = f;
    const Monomial gm = g.leading().m;
    const K ginv = g.leading().c.inv();
    while (!rest.is_zero()) {
        const auto& lt = rest.leading();
        if (gm.divides(lt.m)) {
            Poly<K> t = Poly<K>::monomial(f.nvars(), lt.m / gm, lt.c * ginv);
            q += t;
            rest -= t * g;
        } else {
            Poly<K> t = Poly<K>::monomial(f.nvars(), lt.m, lt.c);
            r += t;
            rest -= t;
        }
    }
    return {q, r};
}

// does ell^k divide f?  (ell linear; exact, by repeated division)
template <class K>
bool divisible_by_power(const Poly<K>& f, const Poly<K>& ell, int k) {
    Poly<K> cur = f;
    for (int i = 0; i < k; ++i) {
        if (cur.is_zero()) return true;
        auto [q, r] = divide(cur, ell);
        if (!r.is_zero()) return false;
        cur = q;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Text format: signed sum of terms c*x^a*y^b*z^c*w^d.

template <class K>
std::string term_body(const Monomial& m, const std::vector<std::string>& names) {
    std::string s;
    for (size_t i = 0; i < names.size(); ++i) {
        if (m.e[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += names[i];
        if (m.e[i] > 1) s += "^" + std::to_string(m.e[i]);
    }
    return s;
}

template <class K>
std::string to_string(const Poly<K>& f, std::vector<std::string> names = {}) {
    if (names.empty())
        names.assign(default_var_names().begin(), default_var_names().begin() + std::max(f.nvars(), 1));
    if (f.is_zero()) return "0";
    std::string out;
    for (const auto& t : f.terms()) {
        std::string coeff = t.c.str();
        bool neg = false;
        if constexpr (std::is_same_v<K, Rat>) {
            if (coeff.size() && coeff[0] == '-') {
                neg = true;
                coeff = coeff.substr(1);
            }
        }
        std::string body = term_body<K>(t.m, names);
        std::string piece;
        if (body.empty())
            piece = coeff;
        else if (coeff == "1")
            piece = body;
        else
            piece = coeff + "*" + body;
        if (out.empty())
            out = neg ? "-" + piece : piece;
        else
            out += (neg ? " - " : " + ") + piece;
    }
    return out;
}

template <class F>
Poly<typename F::Scalar> parse_poly(const F& field, int nvars, const std::string& text,
                                    std::vector<std::string> names = {}) {
    using K = typename F::Scalar;
    if (names.empty())
        names.assign(default_var_names().begin(), default_var_names().begin() + nvars);
    Poly<K> out(nvars);
    size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    auto var_index = [&](const std::string& name) {
        for (int v = 0; v < nvars; ++v)
            if (names[v] == name) return v;
        throw invalid_input("unknown variable '" + name + "'");
    };
    skip_ws();
    if (i == text.size()) throw invalid_input("empty polynomial");
    bool first = true;
    while (i < text.size()) {
        skip_ws();
        int sign = 1;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            throw invalid_input("expected '+' or '-' in polynomial");
        }
        first = false;
        skip_ws();
        K coeff = field.one();
        Monomial mono;
        bool saw_factor = false;
        while (true) {
            skip_ws();
            if (i >= text.size()) break;
            char c = text[i];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                size_t j = i;
                while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '/')) ++j;
                coeff = coeff * field.parse(text.substr(i, j - i));
                i = j;
                saw_factor = true;
            } else if (std::isalpha(static_cast<unsigned char>(c))) {
                size_t j = i;
                while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
                int v = var_index(text.substr(i, j - i));
                i = j;
                int e = 1;
                skip_ws();
                if (i < text.size() && text[i] == '^') {
                    ++i;
                    skip_ws();
                    size_t j2 = i;
                    while (j2 < text.size() && std::isdigit(static_cast<unsigned char>(text[j2]))) ++j2;
                    if (j2 == i) throw invalid_input("missing exponent");
                    if (j2 - i > 3) throw invalid_input("exponent too large");
                    e = std::stoi(text.substr(i, j2 - i));
                    i = j2;
                }
                if (mono.e[v] + e > 255) throw invalid_input("exponent too large");
                mono.e[v] = static_cast<std::uint8_t>(mono.e[v] + e);
                saw_factor = true;
            } else {
                break;
            }
            skip_ws();
            if (i < text.size() && text[i] == '*') {
                ++i;
                continue;
            }
            break;
        }
        if (!saw_factor) throw invalid_input("dangling sign in polynomial");
        if (sign < 0) coeff = -coeff;
        out += Poly<K>::monomial(nvars, mono, coeff);
    }
    return out;
}

}  // namespace x3der
