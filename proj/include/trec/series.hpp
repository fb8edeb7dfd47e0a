#pragma once

// Truncated Laurent series with explicit exactness tracking.
//
// A series knows its valuation v and an order watermark N: coefficients are
// exact for every exponent e < N, zero for e < v, and unknown for e >= N.
// Storage may be shorter than the window; missing trailing coefficients are
// exact zeros. Exact Laurent polynomials carry N = kInfOrder. Every
// operation computes the correct resulting order and fails loudly
// (OrderUnderflow) when a result would have no certified window, instead of
// silently truncating.
//
// The exact zero is degenerate: empty storage with v == N. Ring zeros carry
// N = kInfOrder so they absorb arithmetic neutrally.
//
// The coefficient ring is a template parameter so series can nest;
// TruncatedSeries<TruncatedSeries<Rational>> drives the double residues.

#include "trec/rational.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace trec {

inline constexpr long long kInfOrder = 1'000'000'000'000LL;

inline long long sat_ord(long long x) {
    if (x > kInfOrder) return kInfOrder;
    if (x < -kInfOrder) return -kInfOrder;
    return x;
}
inline long long sat_add(long long a, long long b) { return sat_ord(a + b); }
inline long long sat_mul(long long a, long long b) {
    long double p = static_cast<long double>(a) * static_cast<long double>(b);
    if (p >= static_cast<long double>(kInfOrder)) return kInfOrder;
    if (p <= -static_cast<long double>(kInfOrder)) return -kInfOrder;
    return a * b;
}

struct SeriesError : std::runtime_error {
    explicit SeriesError(const std::string& m) : std::runtime_error(m) {}
};

// A result would have an empty certified window, or a requested coefficient
// lies beyond it. required_order is a sufficient input order when known;
// callers usually double and retry.
struct OrderUnderflow : SeriesError {
    long long required_order;
    explicit OrderUnderflow(const std::string& m, long long req = 0)
        : SeriesError(m), required_order(req) {}
};

struct ZeroDivide : SeriesError {
    explicit ZeroDivide(const std::string& m) : SeriesError(m) {}
};

struct NotASquare : SeriesError {
    explicit NotASquare(const std::string& m) : SeriesError(m) {}
};

template <typename T>
class TruncatedSeries;

template <typename T>
struct series_ring;

template <>
struct series_ring<Rational> {
    static Rational zero() { return Rational(0); }
    static bool is_exact_zero(const Rational& x) { return x.is_zero(); }
    static Rational inverse(const Rational& x) {
        if (x.is_zero()) throw ZeroDivide("inverse of zero coefficient");
        return x.inv();
    }
    static Rational div_long(const Rational& x, long k) { return x / Rational(k); }
    static Rational mul_long(const Rational& x, long k) { return x * Rational(k); }
};

template <typename U>
struct series_ring<TruncatedSeries<U>> {
    using S = TruncatedSeries<U>;
    static S zero() { return S(); }
    static bool is_exact_zero(const S& x) { return x.is_degenerate() && x.order() >= kInfOrder; }
    static S inverse(const S& x) { return x.inverse(); }
    static S div_long(const S& x, long k) { return x.div_long(k); }
    static S mul_long(const S& x, long k) { return x.mul_long(k); }
};

template <typename T>
class TruncatedSeries {
public:
    using ring = series_ring<T>;

    TruncatedSeries() : val_(kInfOrder), order_(kInfOrder) {} // exact zero

    TruncatedSeries(long long valuation, std::vector<T> coeffs, long long order)
        : val_(valuation), order_(order), c_(std::move(coeffs)) {
        if (order_ < val_ || static_cast<long long>(c_.size()) > order_ - val_)
            throw SeriesError("series: storage exceeds certified window");
        normalize();
    }

    static TruncatedSeries zero_below(long long order) {
        TruncatedSeries s;
        s.val_ = s.order_ = order;
        return s;
    }

    // c * s^k, exact.
    static TruncatedSeries monomial(T c, long long k) {
        if (ring::is_exact_zero(c)) return TruncatedSeries();
        TruncatedSeries s;
        s.val_ = k;
        s.order_ = kInfOrder;
        s.c_.push_back(std::move(c));
        return s;
    }

    static TruncatedSeries constant(T c) { return monomial(std::move(c), 0); }

    bool is_degenerate() const { return c_.empty() && val_ == order_; }
    bool is_exact() const { return order_ >= kInfOrder; }
    long long valuation() const { return val_; }
    long long order() const { return order_; }
    long long stored_end() const { return val_ + static_cast<long long>(c_.size()); }
    // End of potentially nonzero coefficients; empty storage contributes none.
    long long coeff_end() const {
        return c_.empty() ? -kInfOrder : val_ + static_cast<long long>(c_.size());
    }

    // Exact coefficient of s^e; throws if e is beyond the certified window.
    T coeff(long long e) const {
        if (e >= order_)
            throw OrderUnderflow("series: coefficient of s^" + std::to_string(e) +
                                     " not certified (order " + std::to_string(order_) + ")",
                                 e + 1);
        return at(e);
    }

    bool coeff_known(long long e) const { return e < order_; }

    // Coefficient of s^-1 (Res f(s) ds).
    T residue() const { return coeff(-1); }

    TruncatedSeries truncated(long long new_order) const {
        if (new_order >= order_) return *this;
        if (new_order <= val_) return zero_below(new_order);
        std::size_t keep = static_cast<std::size_t>(
            std::min<long long>(static_cast<long long>(c_.size()), new_order - val_));
        std::vector<T> v(c_.begin(), c_.begin() + static_cast<long>(keep));
        return TruncatedSeries(val_, std::move(v), new_order);
    }

    TruncatedSeries times_power(long long k) const { // multiply by s^k
        TruncatedSeries s = *this;
        s.val_ = sat_add(s.val_, k);
        s.order_ = sat_add(s.order_, k);
        return s;
    }

    TruncatedSeries operator-() const {
        TruncatedSeries s = *this;
        for (auto& c : s.c_) c = ring::mul_long(c, -1);
        return s;
    }

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
        long long order = std::min(a.order_, b.order_);
        long long val = std::min(a.val_, b.val_);
        long long ext = std::min(order, std::max(a.coeff_end(), b.coeff_end()));
        if (ext <= val) return zero_below(order);
        std::vector<T> v;
        v.reserve(static_cast<std::size_t>(ext - val));
        for (long long e = val; e < ext; ++e) v.push_back(a.at(e) + b.at(e));
        return TruncatedSeries(val, std::move(v), order);
    }
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
        return a + (-b);
    }

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        long long val = sat_add(a.val_, b.val_);
        long long order = std::min(sat_add(a.order_, b.val_), sat_add(b.order_, a.val_));
        if (a.is_degenerate() || b.is_degenerate()) return zero_below(order);
        if (order <= val) throw OrderUnderflow("series: product window empty", order);
        std::size_t na = a.c_.size(), nb = b.c_.size();
        std::size_t w = static_cast<std::size_t>(
            std::min<long long>(static_cast<long long>(na + nb - 1), order - val));
        std::vector<T> v(w, ring::zero());
        for (std::size_t i = 0; i < na; ++i) {
            if (ring::is_exact_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < nb && i + j < w; ++j) {
                if (ring::is_exact_zero(b.c_[j])) continue;
                v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
            }
        }
        return TruncatedSeries(val, std::move(v), order);
    }

    TruncatedSeries scaled(const T& f) const {
        if (ring::is_exact_zero(f)) return TruncatedSeries();
        TruncatedSeries s = *this;
        for (auto& c : s.c_) c = c * f;
        s.normalize();
        return s;
    }

    TruncatedSeries mul_long(long k) const {
        if (k == 0) return TruncatedSeries();
        TruncatedSeries s = *this;
        for (auto& c : s.c_) c = ring::mul_long(c, k);
        s.normalize();
        return s;
    }
    TruncatedSeries div_long(long k) const {
        if (k == 0) throw ZeroDivide("series: division by zero integer");
        TruncatedSeries s = *this;
        for (auto& c : s.c_) c = ring::div_long(c, k);
        return s;
    }

    // Multiplicative inverse; leading coefficient must be invertible and the
    // window finite (truncate exact series first).
    TruncatedSeries inverse() const {
        if (is_degenerate()) throw ZeroDivide("series: inverse of zero series");
        if (is_exact() && c_.size() > 1)
            throw SeriesError("series: truncate exact series before inverting");
        long long w = is_exact() ? 1 : order_ - val_;
        T lead_inv = ring::inverse(c_[0]);
        std::vector<T> r(static_cast<std::size_t>(w), ring::zero());
        r[0] = lead_inv;
        for (long long n = 1; n < w; ++n) {
            T acc = ring::zero();
            for (long long i = 1; i <= n; ++i) {
                const T ci = at(val_ + i);
                if (ring::is_exact_zero(ci)) continue;
                acc = acc + ci * r[static_cast<std::size_t>(n - i)];
            }
            r[static_cast<std::size_t>(n)] = ring::mul_long(lead_inv * acc, -1);
        }
        long long order = is_exact() ? kInfOrder : sat_add(-val_, w);
        if (is_exact()) r.resize(1);
        return TruncatedSeries(-val_, std::move(r), order);
    }

    friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
        if (b.is_degenerate()) throw ZeroDivide("series: division by zero series");
        if (b.is_exact() && b.c_.size() > 1) {
            if (a.order_ >= kInfOrder)
                throw SeriesError("series: truncate one operand of exact/exact division");
            // Truncate b so its watermark is not the binding constraint.
            long long need = sat_add(sat_add(a.order_, -a.val_), 2 * b.val_ + 1);
            return a * b.truncated(need).inverse();
        }
        return a * b.inverse();
    }

    TruncatedSeries pow(long e) const {
        if (e == 0) return monomial_one();
        if (e < 0) return inverse().pow(-e);
        TruncatedSeries base = *this, acc;
        bool have = false;
        long k = e;
        while (k) {
            if (k & 1) {
                acc = have ? acc * base : base;
                have = true;
            }
            k >>= 1;
            if (k) base = base * base;
        }
        return acc;
    }

    TruncatedSeries derivative() const {
        if (is_degenerate()) return zero_below(sat_add(order_, -1));
        std::vector<T> v;
        v.reserve(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i)
            v.push_back(ring::mul_long(c_[i], static_cast<long>(val_ + static_cast<long long>(i))));
        return TruncatedSeries(val_ - 1, std::move(v), sat_ord(order_) >= kInfOrder ? kInfOrder : order_ - 1);
    }

    // Term-wise primitive with zero constant; fails on an s^-1 term.
    TruncatedSeries integrated() const {
        if (is_degenerate()) return zero_below(sat_add(order_, 1));
        std::vector<T> v;
        v.reserve(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) {
            long long e = val_ + static_cast<long long>(i);
            if (e == -1) {
                if (!ring::is_exact_zero(c_[i]))
                    throw SeriesError("series: primitive obstructed by s^-1 term");
                v.push_back(ring::zero());
            } else {
                v.push_back(ring::div_long(c_[i], static_cast<long>(e + 1)));
            }
        }
        return TruncatedSeries(val_ + 1, std::move(v), sat_add(order_, 1));
    }

    // outer(inner); inner must have valuation >= 1 (Laurent outers allowed;
    // exact polynomial-like outers compose to exact results when inner is
    // exact).
    static TruncatedSeries compose(const TruncatedSeries& outer, const TruncatedSeries& inner) {
        if (outer.is_degenerate()) {
            long long vi = inner.is_degenerate() ? 1 : std::max<long long>(1, inner.val_);
            return zero_below(sat_mul(outer.order_, vi));
        }
        if (inner.is_degenerate() || inner.valuation() < 1)
            throw SeriesError("series: composition needs inner valuation >= 1");
        long long vi = inner.val_;
        // Unknown inner tail first enters through the lowest nonzero outer power.
        long long klow = outer.val_ == 0 ? 1 : outer.val_;
        long long bound = std::min(sat_mul(outer.order_, vi),
                                   sat_add(sat_mul(klow - 1, vi), inner.order_));
        long long kmin = std::max<long long>(outer.val_, 0);
        long long kmax = outer.stored_end() - 1; // implied zeros above contribute nothing
        TruncatedSeries res;
        if (kmax >= kmin) {
            TruncatedSeries pos;
            bool have = false;
            for (long long k = kmax; k >= kmin; --k) {
                if (have) pos = pos * inner;
                TruncatedSeries c = constant(outer.at(k));
                pos = have ? pos + c : c;
                have = true;
            }
            if (kmin > 0) pos = pos * inner.pow(static_cast<long>(kmin));
            res = pos;
        }
        if (outer.val_ < 0) {
            TruncatedSeries ii =
                inner.is_exact() && inner.c_.size() > 1
                    ? inner.truncated(sat_add(sat_add(bound, -sat_mul(outer.val_, vi)), 2 * vi)).inverse()
                    : inner.inverse();
            for (long long k = outer.val_; k < std::min<long long>(outer.stored_end(), 0); ++k) {
                const T c = outer.at(k);
                if (ring::is_exact_zero(c)) continue;
                res = res + ii.pow(static_cast<long>(-k)).scaled(c);
            }
        }
        res = res.truncated(bound);
        return res;
    }

    // Functional inverse g with f(g(s)) = s; requires valuation exactly 1.
    TruncatedSeries reverted() const {
        if (is_degenerate() || val_ != 1)
            throw SeriesError("series: reversion needs valuation exactly 1");
        if (is_exact() && c_.size() > 1)
            throw SeriesError("series: truncate exact series before reversion");
        long long w = is_exact() ? 1 : order_ - 1;
        T a1_inv = ring::inverse(c_[0]);
        std::vector<T> g(static_cast<std::size_t>(w), ring::zero());
        g[0] = a1_inv;
        for (long long n = 2; n <= w; ++n) {
            // Partial reversion as an exact polynomial; cancel the s^n error.
            std::vector<T> part(g.begin(), g.begin() + static_cast<long>(n - 1));
            TruncatedSeries gpart(1, std::move(part), kInfOrder);
            TruncatedSeries comp = compose(*this, gpart);
            T en = comp.coeff(n);
            g[static_cast<std::size_t>(n - 1)] = ring::mul_long(a1_inv * en, -1);
        }
        return TruncatedSeries(1, std::move(g), is_exact() ? 2 : order_);
    }

    TruncatedSeries sqrt() const;
    TruncatedSeries exp() const;
    TruncatedSeries log() const;

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        if (a.val_ != b.val_ || a.order_ != b.order_) return false;
        long long ext = std::max(a.coeff_end(), b.coeff_end());
        if (ext < a.val_) return true;
        for (long long e = a.val_; e < ext; ++e)
            if (!ring::is_exact_zero(a.at(e) - b.at(e))) return false;
        return true;
    }

    // Equality of all coefficients on the overlap of certified windows.
    friend bool agree(const TruncatedSeries& a, const TruncatedSeries& b) {
        long long order = std::min(a.order_, b.order_);
        long long val = std::min(a.val_, b.val_);
        long long ext = std::min(order, std::max(a.coeff_end(), b.coeff_end()));
        for (long long e = val; e < ext; ++e)
            if (!ring::is_exact_zero(a.at(e) - b.at(e))) return false;
        return true;
    }

    std::string str(const std::string& var = "s") const;

    // In-window accessor: exact zero outside stored range.
    T at(long long e) const {
        if (e < val_ || e >= stored_end()) return ring::zero();
        return c_[static_cast<std::size_t>(e - val_)];
    }

private:
    static TruncatedSeries monomial_one();

    void normalize() {
        std::size_t lead = 0;
        while (lead < c_.size() && ring::is_exact_zero(c_[lead])) ++lead;
        if (lead) {
            c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
            val_ += static_cast<long long>(lead);
        }
        while (!c_.empty() && ring::is_exact_zero(c_.back())) c_.pop_back();
        if (c_.empty()) val_ = order_;
    }

    long long val_;
    long long order_;
    std::vector<T> c_;
};

template <typename T>
TruncatedSeries<T> TruncatedSeries<T>::monomial_one() {
    throw SeriesError("series: pow(0) is only available over the rational ring");
}

template <>
inline TruncatedSeries<Rational> TruncatedSeries<Rational>::monomial_one() {
    return TruncatedSeries<Rational>::monomial(Rational(1), 0);
}

template <>
inline TruncatedSeries<Rational> TruncatedSeries<Rational>::sqrt() const {
    if (is_degenerate()) throw NotASquare("series: sqrt of zero window");
    if (is_exact() && c_.size() > 1)
        throw SeriesError("series: truncate exact series before sqrt");
    if (val_ % 2 != 0) throw NotASquare("series: sqrt needs even valuation");
    Rational q;
    if (!c_[0].sqrt_exact(q))
        throw NotASquare("series: leading coefficient " + c_[0].str() +
                         " is not a rational square");
    long long hv = val_ / 2;
    long long w = is_exact() ? 1 : order_ - val_;
    std::vector<Rational> g(static_cast<std::size_t>(w), Rational(0));
    g[0] = q;
    Rational two_q = Rational(2) * q;
    for (long long n = 1; n < w; ++n) {
        Rational acc(0);
        for (long long i = 1; i < n; ++i)
            acc += g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(n - i)];
        g[static_cast<std::size_t>(n)] = (at(val_ + n) - acc) / two_q;
    }
    long long order = is_exact() ? kInfOrder : hv + w;
    if (is_exact()) g.resize(1);
    return TruncatedSeries(hv, std::move(g), order);
}

template <>
inline TruncatedSeries<Rational> TruncatedSeries<Rational>::exp() const {
    if (is_degenerate()) {
        if (order_ <= 0) throw OrderUnderflow("series: exp window empty", 1);
        return monomial(Rational(1), 0).truncated(order_ >= kInfOrder ? kInfOrder : order_);
    }
    if (val_ < 1) throw SeriesError("series: exp needs valuation >= 1 (no constant term)");
    if (is_exact()) throw SeriesError("series: truncate exact series before exp");
    long long w = order_;
    if (w <= 0) throw OrderUnderflow("series: exp window empty", 1);
    std::vector<Rational> y(static_cast<std::size_t>(w), Rational(0));
    y[0] = Rational(1);
    for (long long n = 1; n < w; ++n) {
        Rational acc(0);
        for (long long k = 1; k <= n; ++k) {
            Rational fk = at(k);
            if (fk.is_zero()) continue;
            acc += Rational(k) * fk * y[static_cast<std::size_t>(n - k)];
        }
        y[static_cast<std::size_t>(n)] = acc / Rational(n);
    }
    return TruncatedSeries(0, std::move(y), w);
}

template <>
inline TruncatedSeries<Rational> TruncatedSeries<Rational>::log() const {
    if (is_degenerate() || val_ != 0 || !c_[0].is_one())
        throw SeriesError("series: log needs constant term 1");
    if (is_exact() && c_.size() > 1)
        throw SeriesError("series: truncate exact series before log");
    if (is_exact()) return TruncatedSeries(); // log(1) = 0
    return (derivative() / *this).integrated();
}

template <typename T>
std::string TruncatedSeries<T>::str(const std::string& var) const {
    if (is_degenerate())
        return order_ >= kInfOrder ? "0" : "O(" + var + "^" + std::to_string(order_) + ")";
    std::string out;
    for (long long e = val_; e < stored_end(); ++e) {
        const T c = at(e);
        if (ring::is_exact_zero(c)) continue;
        if (!out.empty()) out += " + ";
        if constexpr (std::is_same_v<T, Rational>) {
            out += c.str();
        } else {
            out += "(" + c.str() + ")";
        }
        if (e != 0) out += "*" + var + "^" + std::to_string(e);
    }
    if (out.empty()) out = "0";
    if (order_ < kInfOrder) out += " + O(" + var + "^" + std::to_string(order_) + ")";
    return out;
}

using QSeries = TruncatedSeries<Rational>;
using QQSeries = TruncatedSeries<TruncatedSeries<Rational>>;

} // namespace trec
