#pragma once

// Dense univariate polynomials over the rationals, coefficients stored
// lowest degree first. Zero polynomial is the empty list. Includes exact
// Euclidean division, gcd, and rational root extraction (content + candidate
// divisors of the integer leading/constant coefficients; no general
// factorization engine).

#include "trec/rational.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trec {

class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<Rational> cs) : c_(cs) { normalize(); }
    explicit Polynomial(std::vector<Rational> cs) : c_(std::move(cs)) { normalize(); }
    explicit Polynomial(const Rational& c) : c_{c} { normalize(); }

    static Polynomial zero() { return Polynomial(); }
    static Polynomial one() { return Polynomial{Rational(1)}; }
    // The monomial c * x^k.
    static Polynomial monomial(const Rational& c, long k) {
        if (c.is_zero()) return Polynomial();
        std::vector<Rational> v(static_cast<std::size_t>(k) + 1, Rational(0));
        v.back() = c;
        return Polynomial(std::move(v));
    }

    bool is_zero() const { return c_.empty(); }
    long degree() const { return is_zero() ? -1 : static_cast<long>(c_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(long k) const {
        if (k < 0 || k >= static_cast<long>(c_.size())) return Rational(0);
        return c_[static_cast<std::size_t>(k)];
    }
    Rational leading() const {
        if (is_zero()) throw std::domain_error("Polynomial: leading coeff of zero");
        return c_.back();
    }

    Polynomial operator-() const {
        std::vector<Rational> r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] = -c_[i];
        return Polynomial(std::move(r));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator*(const Rational& s, const Polynomial& a) {
        std::vector<Rational> r(a.c_.size());
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = s * a.c_[i];
        return Polynomial(std::move(r));
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    Rational eval(const Rational& x) const {
        Rational r(0);
        for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) return Polynomial();
        std::vector<Rational> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = Rational(static_cast<long>(i)) * c_[i];
        return Polynomial(std::move(r));
    }

    // Taylor shift: returns p(x + a) as a polynomial in x.
    Polynomial shifted(const Rational& a) const {
        Polynomial r;
        for (std::size_t i = c_.size(); i-- > 0;) {
            r = r * Polynomial{a, Rational(1)} + Polynomial(c_[i]);
        }
        return r;
    }

    // Exact quotient and remainder over Q.
    static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
        if (b.is_zero()) throw std::domain_error("Polynomial: division by zero");
        Polynomial rem = a, quot;
        std::vector<Rational> q;
        long db = b.degree();
        if (rem.degree() >= db) q.assign(static_cast<std::size_t>(rem.degree() - db) + 1, Rational(0));
        while (!rem.is_zero() && rem.degree() >= db) {
            long k = rem.degree() - db;
            Rational f = rem.leading() / b.leading();
            q[static_cast<std::size_t>(k)] = f;
            rem = rem - Polynomial::monomial(f, k) * b;
        }
        return {Polynomial(std::move(q)), rem};
    }

    friend Polynomial operator/(const Polynomial& a, const Polynomial& b) { return divmod(a, b).first; }
    friend Polynomial operator%(const Polynomial& a, const Polynomial& b) { return divmod(a, b).second; }

    Polynomial monic() const {
        if (is_zero()) return *this;
        return leading().inv() * *this;
    }

    std::string str(const std::string& var = "z") const;

private:
    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Rational> c_;
};

inline Polynomial gcd(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
        Polynomial r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
}

inline std::string Polynomial::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        if (!s.empty()) s += " + ";
        s += c_[i].str();
        if (i >= 1) s += "*" + var + (i > 1 ? "^" + std::to_string(i) : "");
    }
    return s;
}

struct RootList {
    std::vector<std::pair<Rational, int>> roots; // (root, multiplicity), sorted ascending
    Polynomial cofactor;                         // root-free remaining factor (monic scale not imposed)
};

namespace detail {

inline std::vector<mpz_class> divisors(const mpz_class& n0) {
    // Trial-division factorization; curve inputs at desk scale keep this small.
    mpz_class n = ::abs(n0);
    std::vector<std::pair<mpz_class, unsigned>> fac;
    for (mpz_class d = 2; d * d <= n; ++d) {
        unsigned e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        if (e) fac.emplace_back(d, e);
    }
    if (n > 1) fac.emplace_back(n, 1);
    std::vector<mpz_class> divs{1};
    for (auto& [p, e] : fac) {
        std::size_t base = divs.size();
        mpz_class pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
    }
    return divs;
}

} // namespace detail

// All rational roots with multiplicities plus the root-free cofactor.
inline RootList rational_roots(const Polynomial& p) {
    RootList out;
    out.cofactor = Polynomial::one();
    if (p.is_zero()) throw std::domain_error("rational_roots: zero polynomial");
    Polynomial work = p;

    // x = 0 roots first.
    int zmult = 0;
    while (!work.is_zero() && work.coeff(0).is_zero() && work.degree() >= 1) {
        std::vector<Rational> shifted(work.coeffs().begin() + 1, work.coeffs().end());
        work = Polynomial(std::move(shifted));
        ++zmult;
    }
    if (zmult) out.roots.emplace_back(Rational(0), zmult);

    if (work.degree() >= 1) {
        // Clear denominators to an integer polynomial.
        mpz_class dlcm = 1;
        for (const auto& c : work.coeffs()) {
            mpz_class d = c.den();
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), dlcm.get_mpz_t(), d.get_mpz_t());
            dlcm = dlcm / g * d;
        }
        std::vector<mpz_class> ic;
        ic.reserve(work.coeffs().size());
        for (const auto& c : work.coeffs()) ic.push_back(c.num() * (dlcm / c.den()));

        auto ps = detail::divisors(ic.front());
        auto qs = detail::divisors(ic.back());
        std::vector<Rational> candidates;
        for (const auto& pp : ps)
            for (const auto& qq : qs) {
                candidates.push_back(Rational(mpq_class(pp, qq)));
                candidates.push_back(Rational(mpq_class(-pp, qq)));
            }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        for (const auto& r : candidates) {
            if (work.degree() < 1) break;
            if (!work.eval(r).is_zero()) continue;
            int mult = 0;
            Polynomial lin{-r, Rational(1)};
            while (work.degree() >= 1) {
                auto [q, rem] = Polynomial::divmod(work, lin);
                if (!rem.is_zero()) break;
                work = q;
                ++mult;
            }
            if (mult) out.roots.emplace_back(r, mult);
        }
    }
    out.cofactor = work;
    std::sort(out.roots.begin(), out.roots.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

} // namespace trec
