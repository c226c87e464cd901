#pragma once

// Exact scalar arithmetic: arbitrary-precision rationals (GMP-backed) and
// prime fields with a runtime modulus.  Everything downstream is templated
// on a small field-context object (RatField / PrimeField) whose Scalar type
// carries its own field data, so mixed-field arithmetic is caught at runtime.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace x3der {

struct invalid_input : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// alpha in {0,1} (or any other collapse of the moduli family)
struct degenerate_moduli : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// a candidate derivation failed the defining divisibility conditions
struct membership_error : invalid_input {
    using invalid_input::invalid_input;
};

struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

#define X3DER_CHECK(cond, msg) \
    do { if (!(cond)) throw ::x3der::internal_error(msg); } while (0)

// ---------------------------------------------------------------------------
// Rationals

class Rat {
  public:
    Rat() : v_(0) {}
    explicit Rat(long n) : v_(n) {}
    Rat(long num, long den) : v_(num, den) {
        if (den == 0) throw invalid_input("rational with zero denominator");
        v_.canonicalize();
    }
    explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat operator+(const Rat& o) const { return Rat(mpq_class(v_ + o.v_)); }
    Rat operator-(const Rat& o) const { return Rat(mpq_class(v_ - o.v_)); }
    Rat operator*(const Rat& o) const { return Rat(mpq_class(v_ * o.v_)); }
    Rat operator/(const Rat& o) const {
        if (o.is_zero()) throw invalid_input("division by zero");
        return Rat(mpq_class(v_ / o.v_));
    }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }

    bool operator==(const Rat& o) const { return v_ == o.v_; }
    bool operator!=(const Rat& o) const { return v_ != o.v_; }

    Rat inv() const {
        if (is_zero()) throw invalid_input("inverse of zero");
        return Rat(mpq_class(1 / v_));
    }

    bool is_integer() const { return v_.get_den() == 1; }
    const mpq_class& value() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    std::string str() const { return v_.get_str(); }

  private:
    mpq_class v_;
};

// ---------------------------------------------------------------------------
// Prime fields.  Elements remember their modulus; a default-constructed
// element is a "field-less" zero that adopts the modulus of its first
// nonzero partner, which keeps zero-filled containers harmless.

class Fp {
  public:
    Fp() : v_(0), p_(0) {}
    Fp(long long n, std::uint32_t p) : p_(p) {
        long long r = n % static_cast<long long>(p);
        if (r < 0) r += p;
        v_ = static_cast<std::uint32_t>(r);
    }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    std::uint32_t rep() const { return v_; }
    std::uint32_t modulus() const { return p_; }

    Fp operator-() const { return raw(v_ == 0 ? 0 : p_ - v_, p_); }
    Fp operator+(const Fp& o) const {
        std::uint32_t p = join(o);
        std::uint64_t s = std::uint64_t(v_) + o.v_;
        return raw(static_cast<std::uint32_t>(s >= p && p ? s - p : s), p);
    }
    Fp operator-(const Fp& o) const { return *this + (-o); }
    Fp operator*(const Fp& o) const {
        std::uint32_t p = join(o);
        if (!p) return Fp();
        return raw(static_cast<std::uint32_t>((std::uint64_t(v_) * o.v_) % p), p);
    }
    Fp operator/(const Fp& o) const { return *this * o.inv(); }
    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }

    bool operator==(const Fp& o) const {
        if (v_ == 0 && o.v_ == 0) return true;
        return v_ == o.v_ && p_ == o.p_;
    }
    bool operator!=(const Fp& o) const { return !(*this == o); }

    Fp inv() const {
        if (v_ == 0) throw invalid_input("inverse of zero");
        // extended Euclid on (v, p)
        long long t = 0, nt = 1, r = p_, nr = v_;
        while (nr != 0) {
            long long q = r / nr;
            long long tmp = t - q * nt; t = nt; nt = tmp;
            tmp = r - q * nr; r = nr; nr = tmp;
        }
        if (t < 0) t += p_;
        return raw(static_cast<std::uint32_t>(t), p_);
    }

    std::string str() const { return std::to_string(v_); }

  private:
    static Fp raw(std::uint32_t v, std::uint32_t p) {
        Fp x; x.v_ = v; x.p_ = p; return x;
    }
    std::uint32_t join(const Fp& o) const {
        if (p_ == 0) return o.p_;
        if (o.p_ != 0 && o.p_ != p_)
            throw internal_error("mixed prime-field moduli");
        return p_;
    }
    std::uint32_t v_;
    std::uint32_t p_;
};

inline bool is_prime_u32(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Field contexts.  These mint scalars; the heavy lifting stays in the
// scalar types themselves.

struct RatField {
    using Scalar = Rat;
    Rat of_int(long long n) const { return Rat(mpq_class(static_cast<long>(n))); }
    Rat zero() const { return Rat(); }
    Rat one() const { return Rat(1L); }
    Rat parse(const std::string& s) const {
        mpq_class v;
        if (v.set_str(s, 10) != 0)
            throw invalid_input("cannot parse rational '" + s + "'");
        if (v.get_den() == 0) throw invalid_input("zero denominator in '" + s + "'");
        return Rat(std::move(v));
    }
    std::string name() const { return "Q"; }
    // only +1 and -1 are rational roots of unity
    bool is_root_of_unity(const Rat& a) const { return a == one() || a == -one(); }
};

struct PrimeField {
    std::uint32_t p;

    using Scalar = Fp;
    explicit PrimeField(std::uint32_t p_) : p(p_) {
        if (!is_prime_u32(p)) throw invalid_input("modulus " + std::to_string(p) + " is not prime");
    }
    Fp of_int(long long n) const { return Fp(n, p); }
    Fp zero() const { return Fp(0, p); }
    Fp one() const { return Fp(1, p); }
    Fp parse(const std::string& s) const {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            Fp a = parse(s.substr(0, slash));
            Fp b = parse(s.substr(slash + 1));
            return a / b;
        }
        try {
            size_t pos = 0;
            long long n = std::stoll(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return of_int(n);
        } catch (const std::exception&) {
            throw invalid_input("cannot parse field element '" + s + "'");
        }
    }
    std::string name() const { return "Fp:" + std::to_string(p); }
    bool is_root_of_unity(const Fp& a) const { return !a.is_zero(); }
};

// multiplicative order of a; 0 encodes infinite order (rationals other
// than +-1)
template <class F>
int multiplicative_order(const F& field, const typename F::Scalar& a) {
    if (a.is_zero()) throw invalid_input("order of zero");
    if constexpr (std::is_same_v<F, RatField>) {
        if (a == field.one()) return 1;
        if (a == -field.one()) return 2;
        return 0;
    } else {
        auto x = a;
        int k = 1;
        while (!(x == field.one())) {
            x = x * a;
            ++k;
            if (static_cast<std::uint64_t>(k) > field.p)
                throw internal_error("order computation overran the group");
        }
        return k;
    }
}

// ---------------------------------------------------------------------------
// Runtime field selection ("Q" | "Fp:<p>")

struct FieldConfig {
    enum class Kind { Rationals, Prime };
    Kind kind = Kind::Rationals;
    std::uint32_t p = 0;

    static FieldConfig rationals() { return {Kind::Rationals, 0}; }
    static FieldConfig prime(std::uint32_t p) {
        if (!is_prime_u32(p)) throw invalid_input("modulus " + std::to_string(p) + " is not prime");
        return {Kind::Prime, p};
    }
    static FieldConfig parse(const std::string& s) {
        if (s == "Q" || s == "q") return rationals();
        if (s.rfind("Fp:", 0) == 0 || s.rfind("fp:", 0) == 0) {
            try {
                unsigned long v = std::stoul(s.substr(3));
                return prime(static_cast<std::uint32_t>(v));
            } catch (const invalid_input&) {
                throw;
            } catch (const std::exception&) {
                throw invalid_input("cannot parse field '" + s + "'");
            }
        }
        throw invalid_input("cannot parse field '" + s + "' (expected Q or Fp:<p>)");
    }
    std::string str() const {
        return kind == Kind::Rationals ? "Q" : "Fp:" + std::to_string(p);
    }
    bool operator==(const FieldConfig&) const = default;
};

template <class Fn>
decltype(auto) with_field(const FieldConfig& fc, Fn&& fn) {
    if (fc.kind == FieldConfig::Kind::Rationals) return fn(RatField{});
    return fn(PrimeField{fc.p});
}

}  // namespace x3der
