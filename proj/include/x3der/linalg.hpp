#pragma once

// Dense exact linear algebra.  The reduced row echelon form is unique, so
// every kernel basis computed here is canonical for the given row/column
// order; pivot selection only affects speed.  Over Q the elimination runs
// on primitive integer rows (fraction-free, content-stripped); over F_p it
// is plain Gauss-Jordan.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "x3der/field.hpp"
#include "x3der/poly.hpp"

namespace x3der {

template <class T>
class Mat {
  public:
    Mat() : r_(0), c_(0) {}
    Mat(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols) {}
    Mat(int rows, int cols, T fill)
        : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols, std::move(fill)) {}

    static Mat identity(int n, T one) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }
    static Mat from_rows(const std::vector<std::vector<T>>& rows) {
        int r = static_cast<int>(rows.size());
        int c = r ? static_cast<int>(rows[0].size()) : 0;
        Mat m(r, c);
        for (int i = 0; i < r; ++i) {
            if (static_cast<int>(rows[i].size()) != c) throw invalid_input("ragged matrix rows");
            for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    T& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    const T& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

    std::vector<T> row(int i) const {
        return std::vector<T>(a_.begin() + static_cast<size_t>(i) * c_,
                              a_.begin() + static_cast<size_t>(i + 1) * c_);
    }

    bool operator==(const Mat&) const = default;

  private:
    int r_, c_;
    std::vector<T> a_;
};

template <class T>
Mat<T> mul(const Mat<T>& a, const Mat<T>& b) {
    if (a.cols() != b.rows()) throw invalid_input("matrix product shape mismatch");
    X3DER_CHECK(a.cols() > 0, "empty inner dimension");
    Mat<T> r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            T acc = a(i, 0) * b(0, j);
            for (int k = 1; k < a.cols(); ++k) acc = acc + a(i, k) * b(k, j);
            r(i, j) = acc;
        }
    return r;
}

template <class K>
struct RrefResult {
    Mat<K> mat;
    std::vector<int> pivots;  // pivot column of row i
};

namespace detail {

// Gauss-Jordan over an arbitrary field scalar
template <class K>
RrefResult<K> rref_field(Mat<K> a) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
        int pr = -1;
        for (int i = r; i < a.rows(); ++i)
            if (!a(i, c).is_zero()) { pr = i; break; }
        if (pr < 0) continue;
        if (pr != r)
            for (int j = c; j < a.cols(); ++j) std::swap(a(pr, j), a(r, j));
        K inv = a(r, c).inv();
        for (int j = c; j < a.cols(); ++j) a(r, j) = a(r, j) * inv;
        for (int i = 0; i < a.rows(); ++i) {
            if (i == r || a(i, c).is_zero()) continue;
            K f = a(i, c);
            for (int j = c; j < a.cols(); ++j) a(i, j) = a(i, j) - f * a(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(a), std::move(pivots)};
}

inline void strip_content(std::vector<mpz_class>& row) {
    mpz_class g = 0;
    for (const auto& v : row) {
        if (v != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        if (g == 1) return;
    }
    if (g == 0 || g == 1) return;
    for (auto& v : row)
        if (v != 0) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
}

// fraction-free reduction on primitive integer rows; rationalized at the end
inline RrefResult<Rat> rref_rat(const Mat<Rat>& a) {
    const int rows = a.rows(), cols = a.cols();
    std::vector<std::vector<mpz_class>> w(rows, std::vector<mpz_class>(cols));
    for (int i = 0; i < rows; ++i) {
        mpz_class l = 1;
        for (int j = 0; j < cols; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).den().get_mpz_t());
        for (int j = 0; j < cols; ++j) w[i][j] = a(i, j).num() * (l / a(i, j).den());
        strip_content(w[i]);
    }
    std::vector<int> pivots;
    int r = 0;
    mpz_class t;
    for (int c = 0; c < cols && r < rows; ++c) {
        int pr = -1;
        size_t best = 0;
        for (int i = r; i < rows; ++i) {
            if (w[i][c] == 0) continue;
            size_t sz = mpz_sizeinbase(w[i][c].get_mpz_t(), 2);
            if (pr < 0 || sz < best) { pr = i; best = sz; }
        }
        if (pr < 0) continue;
        std::swap(w[pr], w[r]);
        const auto& p = w[r][c];
        for (int i = 0; i < rows; ++i) {
            if (i == r || w[i][c] == 0) continue;
            const mpz_class f = w[i][c];
            // full-row update: rows already holding a pivot can carry nonzero
            // entries in free columns left of c, and those must scale too
            for (int j = 0; j < cols; ++j) {
                t = w[i][j] * p - f * w[r][j];
                w[i][j] = t;
            }
            strip_content(w[i]);
        }
        pivots.push_back(c);
        ++r;
    }
    Mat<Rat> out(rows, cols);
    for (int i = 0; i < static_cast<int>(pivots.size()); ++i) {
        mpq_class pv(w[i][pivots[i]]);
        for (int j = 0; j < cols; ++j) {
            if (w[i][j] == 0) continue;
            out(i, j) = Rat(mpq_class(w[i][j]) / pv);
        }
    }
    return {std::move(out), std::move(pivots)};
}

}  // namespace detail

template <class K>
RrefResult<K> rref(const Mat<K>& a) {
    if constexpr (std::is_same_v<K, Rat>)
        return detail::rref_rat(a);
    else
        return detail::rref_field(a);
}

template <class K>
int rank(const Mat<K>& a) {
    return static_cast<int>(rref(a).pivots.size());
}

// canonical reduced-echelon basis of the right kernel, one vector per free
// column, each normalized to leading entry 1
template <class F, class K = typename F::Scalar>
std::vector<std::vector<K>> kernel_basis(const F& field, const Mat<K>& a) {
    auto [r, pivots] = rref(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<std::vector<K>> out;
    for (int f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<K> v(a.cols(), field.zero());
        v[f] = field.one();
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, f);
        for (auto& c : v)
            if (!c.is_zero()) {
                if (!c.is_one()) {
                    K inv = c.inv();
                    for (auto& x : v) x = x * inv;
                }
                break;
            }
        out.push_back(std::move(v));
    }
    return out;
}

template <class K>
Mat<K> inverse_matrix(const Mat<K>& a) {
    if (a.rows() != a.cols()) throw invalid_input("inverse of non-square matrix");
    const int n = a.rows();
    K one;
    bool found = false;
    for (int i = 0; i < n && !found; ++i)
        for (int j = 0; j < n && !found; ++j)
            if (!a(i, j).is_zero()) {
                one = a(i, j) * a(i, j).inv();
                found = true;
            }
    X3DER_CHECK(found, "inverting the zero matrix");
    Mat<K> aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = one;
    }
    auto [r, piv] = rref(aug);
    if (static_cast<int>(piv.size()) != n || piv.back() != n - 1)
        throw invalid_input("singular matrix");
    Mat<K> inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = r(i, n + j);
    return inv;
}

template <class K>
bool matvec_is_zero(const Mat<K>& a, const std::vector<K>& v) {
    for (int i = 0; i < a.rows(); ++i) {
        K acc;
        for (int j = 0; j < a.cols(); ++j) acc += a(i, j) * v[j];
        if (!acc.is_zero()) return false;
    }
    return true;
}

// exact determinant of a scalar matrix by Gaussian elimination
template <class K>
K det_scalar(Mat<K> a) {
    if (a.rows() != a.cols()) throw invalid_input("determinant of non-square matrix");
    const int n = a.rows();
    X3DER_CHECK(n > 0, "determinant of empty matrix");
    bool neg = false;
    K det = a(0, 0);  // placeholder, recomputed below
    std::vector<K> pivvals;
    for (int c = 0; c < n; ++c) {
        int pr = -1;
        for (int i = c; i < n; ++i)
            if (!a(i, c).is_zero()) { pr = i; break; }
        if (pr < 0) return K();
        if (pr != c) {
            neg = !neg;
            for (int j = c; j < n; ++j) std::swap(a(pr, j), a(c, j));
        }
        pivvals.push_back(a(c, c));
        K inv = a(c, c).inv();
        for (int i = c + 1; i < n; ++i) {
            if (a(i, c).is_zero()) continue;
            K f = a(i, c) * inv;
            for (int j = c; j < n; ++j) a(i, j) = a(i, j) - f * a(c, j);
        }
    }
    det = pivvals[0];
    for (size_t i = 1; i < pivvals.size(); ++i) det = det * pivvals[i];
    return neg ? -det : det;
}

// symbolic determinant by cofactor expansion (memoized over column subsets)
template <class K>
Poly<K> det(const Mat<Poly<K>>& a) {
    if (a.rows() != a.cols()) throw invalid_input("determinant of non-square matrix");
    const int n = a.rows();
    X3DER_CHECK(n > 0 && n <= 8, "cofactor determinant limited to small matrices");
    const int nv = a(0, 0).nvars();
    std::map<std::uint32_t, Poly<K>> memo;
    auto rec = [&](auto&& self, int row, std::uint32_t colmask) -> Poly<K> {
        if (row == n) throw internal_error("empty minor");
        auto it = memo.find(colmask);
        if (it != memo.end()) return it->second;
        Poly<K> acc(nv);
        int sign = 1, k = 0;
        for (int c = 0; c < n; ++c) {
            if (!(colmask & (1u << c))) continue;
            const Poly<K>& e = a(row, c);
            if (!e.is_zero()) {
                Poly<K> sub = (row == n - 1) ? e : e * self(self, row + 1, colmask & ~(1u << c));
                acc = (sign > 0) ? acc + sub : acc - sub;
            }
            sign = -sign;
            ++k;
        }
        memo.emplace(colmask, acc);
        return acc;
    };
    std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
    // memo keyed by column subset is valid because the row range is
    // determined by the subset size
    return rec(rec, 0, full);
}

// unique solution of A x = b, if it exists
template <class K>
std::optional<std::vector<K>> solve_unique(const Mat<K>& a, const std::vector<K>& b) {
    Mat<K> aug(a.rows(), a.cols() + 1);
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    auto [r, pivots] = rref(aug);
    for (int c : pivots)
        if (c == a.cols()) return std::nullopt;  // inconsistent
    if (static_cast<int>(pivots.size()) != a.cols()) return std::nullopt;  // underdetermined
    std::vector<K> x(a.cols());
    for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = r(i, a.cols());
    return x;
}

// incrementally maintained reduced echelon span; add() order is the
// deterministic tie-break for completions
template <class K>
struct RowSpace {
    std::vector<std::vector<K>> rows;  // RREF rows, pivots strictly increasing
    std::vector<int> piv;

    int dim() const { return static_cast<int>(rows.size()); }

    std::vector<K> reduce(std::vector<K> v) const {
        for (size_t i = 0; i < rows.size(); ++i) {
            K f = v[piv[i]];
            if (f.is_zero()) continue;
            for (size_t j = piv[i]; j < v.size(); ++j) v[j] = v[j] - f * rows[i][j];
        }
        return v;
    }
    bool contains(std::vector<K> v) const {
        v = reduce(std::move(v));
        for (const auto& c : v)
            if (!c.is_zero()) return false;
        return true;
    }
    // reduces v against the span; if independent, inserts it (normalized,
    // back-reduced) and returns the inserted row
    std::optional<std::vector<K>> add(std::vector<K> v) {
        v = reduce(std::move(v));
        int p = -1;
        for (size_t j = 0; j < v.size(); ++j)
            if (!v[j].is_zero()) { p = static_cast<int>(j); break; }
        if (p < 0) return std::nullopt;
        K inv = v[p].inv();
        for (auto& c : v) c = c * inv;
        for (size_t i = 0; i < rows.size(); ++i) {
            K f = rows[i][p];
            if (f.is_zero()) continue;
            for (size_t j = 0; j < v.size(); ++j) rows[i][j] = rows[i][j] - f * v[j];
        }
        auto pos = std::upper_bound(piv.begin(), piv.end(), p) - piv.begin();
        rows.insert(rows.begin() + pos, v);
        piv.insert(piv.begin() + pos, p);
        return rows[pos];
    }
};

// graded matrix: nonzero entries must be homogeneous of degree
// col_deg[j] - row_deg[i]
template <class K>
struct GradedMat {
    Mat<Poly<K>> mat;
    std::vector<int> row_deg;
    std::vector<int> col_deg;

    void validate() const {
        if (static_cast<int>(row_deg.size()) != mat.rows() ||
            static_cast<int>(col_deg.size()) != mat.cols())
            throw invalid_input("degree label size mismatch");
        for (int i = 0; i < mat.rows(); ++i)
            for (int j = 0; j < mat.cols(); ++j) {
                const auto& e = mat(i, j);
                if (e.is_zero()) continue;
                if (!e.is_homogeneous() || e.degree() != col_deg[j] - row_deg[i])
                    throw invalid_input("graded matrix entry of wrong degree");
            }
    }
};

}  // namespace x3der
