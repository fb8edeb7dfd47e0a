#pragma once

// Rational functions over Q, normalized on construction: denominator monic,
// numerator/denominator coprime. Local Laurent expansion at finite points and
// at infinity (w = 1/z chart), and exact partial fraction decomposition over
// a supplied or discovered set of rational poles.

#include "trec/polynomial.hpp"
#include "trec/series.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trec {

class RationalFunction {
public:
    RationalFunction() : num_(), den_(Polynomial::one()) {}
    RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw std::domain_error("RationalFunction: zero denominator");
        normalize();
    }
    explicit RationalFunction(const Polynomial& p) : num_(p), den_(Polynomial::one()) {}
    explicit RationalFunction(const Rational& c) : num_(Polynomial(c)), den_(Polynomial::one()) {}

    static RationalFunction zero() { return RationalFunction(); }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    RationalFunction operator-() const { return RationalFunction(-num_, den_); }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator*(const Rational& s, const RationalFunction& a) {
        return RationalFunction(s * a.num_, a.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw std::domain_error("RationalFunction: division by zero");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

    RationalFunction derivative() const {
        return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    bool defined_at(const Rational& x) const { return !den_.eval(x).is_zero(); }
    Rational eval(const Rational& x) const {
        Rational d = den_.eval(x);
        if (d.is_zero()) throw std::domain_error("RationalFunction: pole at " + x.str());
        return num_.eval(x) / d;
    }

    // Order of vanishing at x: multiplicity of x as a zero of num minus as a
    // zero of den (negative at poles).
    long valuation_at(const Rational& x) const {
        if (is_zero()) throw std::domain_error("valuation of zero function");
        auto mult = [&x](const Polynomial& p) {
            long m = 0;
            Polynomial w = p, lin{-x, Rational(1)};
            while (!w.is_zero() && w.eval(x).is_zero()) {
                w = w / lin;
                ++m;
            }
            return m;
        };
        return mult(num_) - mult(den_);
    }

    std::string str(const std::string& var = "z") const {
        if (is_polynomial()) return num_.str(var);
        return "(" + num_.str(var) + ") / (" + den_.str(var) + ")";
    }

private:
    void normalize() {
        if (num_.is_zero()) {
            den_ = Polynomial::one();
            return;
        }
        Polynomial g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
        Rational lead = den_.leading();
        if (!lead.is_one()) {
            Rational li = lead.inv();
            num_ = li * num_;
            den_ = li * den_;
        }
    }

    Polynomial num_, den_;
};

inline QSeries to_series(const Polynomial& p) {
    if (p.is_zero()) return QSeries();
    return QSeries(0, p.coeffs(), kInfOrder);
}

// Laurent expansion of f(a + s) certified below s^order.
inline QSeries local_series(const RationalFunction& f, const Rational& a, long long order) {
    if (f.is_zero()) return QSeries();
    QSeries ns = to_series(f.num().shifted(a));
    QSeries ds = to_series(f.den().shifted(a));
    long long vn = ns.valuation(), vd = ds.valuation();
    return ns.truncated(sat_add(order, vd)) / ds.truncated(sat_add(sat_add(order, 2 * vd), -vn));
}

// Laurent expansion of f(1/w) in w certified below w^order.
inline QSeries infinity_series(const RationalFunction& f, long long order) {
    if (f.is_zero()) return QSeries();
    auto reversed = [](const Polynomial& p) {
        std::vector<Rational> c(p.coeffs().rbegin(), p.coeffs().rend());
        return QSeries(0, std::move(c), kInfOrder);
    };
    QSeries ns = reversed(f.num());
    QSeries ds = reversed(f.den());
    long long shift = f.den().degree() - f.num().degree();
    long long vn = ns.valuation(), vd = ds.valuation();
    QSeries q = ns.truncated(sat_add(order, vd - shift)) /
                ds.truncated(sat_add(sat_add(sat_add(order, 2 * vd), -vn), -shift));
    return q.times_power(shift);
}

struct PartialFractions {
    // (pole, multiplicity) -> coefficient of 1/(z - pole)^multiplicity
    std::map<std::pair<Rational, int>, Rational> terms;
    Polynomial polynomial_part;
};

struct IrrationalDenominator : std::runtime_error {
    Polynomial factor;
    explicit IrrationalDenominator(Polynomial f)
        : std::runtime_error("denominator has no rational splitting; offending factor " + f.str()),
          factor(std::move(f)) {}
};

// Exact decomposition over the supplied poles; throws if the denominator does
// not split over them (reporting the offending factor). Reassembling the
// parts reproduces f identically.
inline PartialFractions partial_fractions(const RationalFunction& f,
                                          const std::vector<Rational>& poles) {
    PartialFractions out;
    if (f.is_zero()) return out;
    out.polynomial_part = Polynomial::divmod(f.num(), f.den()).first;

    Polynomial rem = f.den();
    std::vector<std::pair<Rational, int>> mult;
    for (const auto& a : poles) {
        Polynomial lin{-a, Rational(1)};
        int m = 0;
        while (!rem.is_zero() && rem.eval(a).is_zero()) {
            auto [q, r] = Polynomial::divmod(rem, lin);
            if (!r.is_zero()) break;
            rem = q;
            ++m;
        }
        if (m) mult.emplace_back(a, m);
    }
    if (rem.degree() > 0) throw IrrationalDenominator(rem);

    for (const auto& [a, m] : mult) {
        QSeries loc = local_series(f, a, 0);
        for (int j = 1; j <= m; ++j) {
            Rational c = loc.coeff(-j);
            if (!c.is_zero()) out.terms[{a, j}] = c;
        }
    }
    return out;
}

// Discovers the rational poles itself; same contract otherwise.
inline PartialFractions partial_fractions(const RationalFunction& f) {
    if (f.is_zero()) return PartialFractions{};
    RootList roots = rational_roots(f.den());
    if (roots.cofactor.degree() > 0) throw IrrationalDenominator(roots.cofactor);
    std::vector<Rational> poles;
    poles.reserve(roots.roots.size());
    for (auto& [a, m] : roots.roots) poles.push_back(a);
    return partial_fractions(f, poles);
}

inline RationalFunction reassemble(const PartialFractions& pf) {
    RationalFunction acc(pf.polynomial_part);
    for (const auto& [key, c] : pf.terms) {
        const auto& [a, m] = key;
        Polynomial lin{-a, Rational(1)};
        Polynomial den = Polynomial::one();
        for (int i = 0; i < m; ++i) den = den * lin;
        acc = acc + RationalFunction(Polynomial(c), den);
    }
    return acc;
}

} // namespace trec
