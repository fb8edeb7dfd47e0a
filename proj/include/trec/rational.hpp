#pragma once

// Exact arbitrary-precision rational numbers, the coefficient field for the
// whole engine. Thin value wrapper over GMP's mpq_class: always canonical
// (lowest terms, positive denominator), no rounding anywhere.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace trec {

class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(static_cast<signed long>(n)) {}
    Rational(long long n) : v_() { mpz_class z; mpz_import(z.get_mpz_t(), 1, -1, sizeof(n), 0, 0, &n); v_ = (n < 0) ? mpq_class(0) : mpq_class(z); if (n < 0) { unsigned long long m = static_cast<unsigned long long>(-(n + 1)) + 1ULL; mpz_class zm; mpz_import(zm.get_mpz_t(), 1, -1, sizeof(m), 0, 0, &m); v_ = -mpq_class(zm);} }
    Rational(int n) : v_(n) {}
    Rational(long num, long den) : v_(static_cast<signed long>(num), static_cast<signed long>(den)) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }
    explicit Rational(const mpz_class& z) : v_(z) {}

    // Accepts "p", "p/q", leading '-', arbitrary size.
    static Rational parse(std::string_view s) {
        if (s.empty()) throw std::invalid_argument("Rational: empty string");
        mpq_class q;
        if (q.set_str(std::string(s), 10) != 0)
            throw std::invalid_argument("Rational: bad literal '" + std::string(s) + "'");
        if (q.get_den() == 0) throw std::domain_error("Rational: zero denominator");
        q.canonicalize();
        Rational r;
        r.v_ = q;
        return r;
    }

    std::string str() const { return v_.get_str(); }
    const mpz_class& num() const { return v_.get_num(); }
    const mpz_class& den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    Rational inv() const {
        if (is_zero()) throw std::domain_error("Rational: inverse of zero");
        return Rational(mpq_class(1 / v_));
    }

    Rational pow(long e) const {
        if (e == 0) return Rational(1);
        if (e < 0) return inv().pow(-e);
        mpq_class r;
        mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(v_.get_mpq_t()), static_cast<unsigned long>(e));
        mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(v_.get_mpq_t()), static_cast<unsigned long>(e));
        return Rational(r);
    }

    // Exact square root if this is the square of a rational; nullopt-style via flag.
    bool sqrt_exact(Rational& out) const {
        if (sign() < 0) return false;
        mpz_class ns, nr, ds, dr;
        mpz_sqrtrem(ns.get_mpz_t(), nr.get_mpz_t(), num().get_mpz_t());
        if (nr != 0) return false;
        mpz_sqrtrem(ds.get_mpz_t(), dr.get_mpz_t(), den().get_mpz_t());
        if (dr != 0) return false;
        out = Rational(mpq_class(ns, ds));
        return true;
    }

    std::size_t hash() const {
        std::hash<std::string> h;
        return h(str());
    }

private:
    mpq_class v_;
};

inline Rational abs(const Rational& a) { return a.sign() < 0 ? -a : a; }

inline Rational factorial(long n) {
    if (n < 0) throw std::domain_error("factorial of negative");
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(f);
}

inline Rational binomial(long n, long k) {
    if (k < 0 || k > n) return Rational(0);
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(b);
}

} // namespace trec
