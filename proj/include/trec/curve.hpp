#pragma once

// Genus-0 spectral curve in a global rational coordinate: y is a rational
// function and dx = rho(z) dz a rational 1-form. x itself may be
// non-rational (log-type curves); only rho and y enter the computations,
// local primitives are taken term by term.
//
// A BranchFrame packages the local data at one simple branch point a: the
// sheet-exchange involution sigma with x(a + sigma(s)) = x(a + s), the offset
// X(s) = x(a+s) - x(a), the odd combination dY(s) = y(a+s) - y(a+sigma(s)),
// and the potential Phi with Phi' = y(a+s) rho(a+s), Phi(0) = 0.

#include "trec/ratfunc.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trec {

struct CurveError : std::runtime_error {
    explicit CurveError(const std::string& m) : std::runtime_error(m) {}
};

class SpectralCurve {
public:
    SpectralCurve(std::string label, RationalFunction y, RationalFunction rho,
                  std::optional<RationalFunction> x = std::nullopt)
        : label_(std::move(label)), y_(std::move(y)), rho_(std::move(rho)), x_(std::move(x)) {
        if (rho_.is_zero()) throw CurveError("curve '" + label_ + "': dx is identically zero");
        if (x_ && x_->derivative() != rho_)
            throw CurveError("curve '" + label_ + "': derivative of x does not equal dx/dz");
        branch_points_ = find_branchpoints();
    }

    const std::string& label() const { return label_; }
    const RationalFunction& y() const { return y_; }
    const RationalFunction& rho() const { return rho_; }
    const std::optional<RationalFunction>& x() const { return x_; }
    const std::vector<Rational>& branch_points() const { return branch_points_; }

    // y dx as a rational 1-form coefficient (the disc amplitude; the
    // recursion's first correlator carries the opposite sign).
    RationalFunction y_dx() const { return y_ * rho_; }

    // Canonical content string; hashes and cache keys derive from it.
    std::string content_key() const {
        std::string s = "y=" + y_.str() + ";dx=" + rho_.str();
        if (x_) s += ";x=" + x_->str();
        return s;
    }

    SpectralCurve with_y(const RationalFunction& ny, const std::string& suffix) const {
        return SpectralCurve(label_ + suffix, ny, rho_, x_);
    }
    SpectralCurve rescaled(const Rational& lambda) const {
        return with_y(lambda * y_, "*" + lambda.str() + "y");
    }
    SpectralCurve shifted_y(const Rational& c) const {
        return with_y(y_ + RationalFunction(c), "+" + c.str());
    }
    // y -> y + R(x); needs rational x.
    SpectralCurve shifted_y_by_x() const {
        if (!x_) throw CurveError("curve '" + label_ + "': no rational x available for y+x shift");
        return with_y(y_ + *x_, "+x");
    }

private:
    std::vector<Rational> find_branchpoints() const {
        RootList zeros = rational_roots(rho_.num());
        if (zeros.cofactor.degree() > 0)
            throw CurveError("curve '" + label_ + "': dx has a nonrational zero; factor " +
                             zeros.cofactor.str());
        std::vector<Rational> bps;
        for (const auto& [a, mult] : zeros.roots) {
            if (mult != 1)
                throw CurveError("curve '" + label_ + "': zero of dx at " + a.str() +
                                 " is not simple (multiplicity " + std::to_string(mult) + ")");
            if (!y_.defined_at(a))
                throw CurveError("curve '" + label_ + "': y has a pole at branch point " + a.str());
            if (y_.derivative().eval(a).is_zero())
                throw CurveError("curve '" + label_ + "': dy vanishes at branch point " + a.str());
            bps.push_back(a);
        }
        if (bps.empty()) throw CurveError("curve '" + label_ + "': dx has no rational zeros");
        return bps;
    }

    std::string label_;
    RationalFunction y_, rho_;
    std::optional<RationalFunction> x_;
    std::vector<Rational> branch_points_;
};

struct BranchFrame {
    Rational a;
    long long order; // every member is certified at least below s^order
    QSeries sigma;   // sigma(s) = -s + O(s^2), X(sigma(s)) = X(s)
    QSeries X;       // x(a+s) - x(a), valuation exactly 2
    QSeries dY;      // y(a+s) - y(a+sigma(s)), valuation exactly 1
    QSeries Phi;     // primitive of y(a+s) rho(a+s) with Phi(0) = 0
    QSeries y_loc;   // y(a+s)
    QSeries rho_loc; // rho(a+s)
};

// Newton-solve X(sigma) = X with sigma = -s + O(s^2).
inline QSeries local_involution_from_X(const QSeries& X, const QSeries& Xprime, long long order,
                                       const std::string& where) {
    if (X.valuation() != 2)
        throw CurveError(where + ": X does not vanish to exactly second order (valuation " +
                         std::to_string(X.valuation()) + ")");
    QSeries sigma = QSeries::monomial(Rational(-1), 1);
    for (int it = 0; it < 64; ++it) {
        QSeries err = QSeries::compose(X, sigma) - X;
        if (err.is_degenerate() || err.valuation() >= order + 1) break;
        QSeries corr = err / QSeries::compose(Xprime, sigma);
        sigma = sigma - corr;
        if (it == 63) throw CurveError(where + ": involution iteration failed to converge");
    }
    sigma = sigma.truncated(order);
    if (!agree(QSeries::compose(X, sigma), X))
        throw CurveError(where + ": involution does not preserve X");
    return sigma;
}

inline QSeries local_involution(const SpectralCurve& curve, const Rational& a, long long order) {
    QSeries rho_loc = local_series(curve.rho(), a, order + 2);
    QSeries X = rho_loc.integrated();
    return local_involution_from_X(X, rho_loc, order, "curve '" + curve.label() + "' at " + a.str());
}

inline BranchFrame build_frame(const SpectralCurve& curve, const Rational& a, long long order) {
    const std::string where = "curve '" + curve.label() + "' at " + a.str();
    BranchFrame f;
    f.a = a;
    f.order = order;
    f.rho_loc = local_series(curve.rho(), a, order + 2);
    f.y_loc = local_series(curve.y(), a, order + 2);
    f.X = f.rho_loc.integrated();
    f.sigma = local_involution_from_X(f.X, f.rho_loc, order, where);
    f.dY = f.y_loc - QSeries::compose(f.y_loc, f.sigma);
    f.Phi = (f.y_loc * f.rho_loc).integrated();

    if (f.dY.valuation() != 1)
        throw CurveError(where + ": y(z) - y(zbar) does not vanish to exactly first order");
    if (!agree(QSeries::compose(f.sigma, f.sigma), QSeries::monomial(Rational(1), 1)))
        throw CurveError(where + ": sigma is not an involution to the requested order");
    if (!agree(QSeries::compose(f.dY, f.sigma), -f.dY))
        throw CurveError(where + ": y(z) - y(zbar) is not odd under sigma");
    return f;
}

} // namespace trec
