#pragma once

// Re-expansion layer: Laurent coefficients of correlators in powers of an
// arbitrary weight function f = R * exp(Q) at a chosen point (Lagrange
// inversion by iterated residues), decomposition on the B_{a,k} basis,
// Kontsevich times and dual times, and psi-class intersection numbers for
// single-branch-point curves with all times zero.
//
// Conventions:
//   * stable targets report A~_{k...} = Res ... Res omega Prod f(z_i)^{k_i};
//   * the disc target reports the moments of y dx, i.e. the coefficients of
//     f^{-k-1} df in y dx (these orientations are what make map counts,
//     Catalan moments and Hurwitz numbers come out positive).
// Exponential weights stay rational: exp(Q - Q(p)) is expanded as a series
// and the omitted constant exp(Q(p)) is recorded as a normalization note.

#include "trec/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace trec {

struct BadWeight : std::runtime_error {
    explicit BadWeight(const std::string& m) : std::runtime_error(m) {}
};

struct WeightFunction {
    std::optional<Rational> point; // nullopt = infinity chart (w = 1/z)
    RationalFunction R;
    RationalFunction Q; // weight f = R * exp(Q); Q may be zero

    static WeightFunction rational(std::optional<Rational> p, RationalFunction r) {
        return {std::move(p), std::move(r), RationalFunction::zero()};
    }
};

struct ExpansionReport {
    std::string kind;
    std::map<std::vector<long long>, Rational> values; // index tuple -> exact value
    std::vector<std::pair<std::string, std::string>> notes;

    Rational at(const std::vector<long long>& k) const {
        auto it = values.find(k);
        return it == values.end() ? Rational(0) : it->second;
    }
    Rational at(long long k) const { return at(std::vector<long long>{k}); }
};

namespace detail {

struct LocalWeight {
    QSeries f;   // local series of the weight in the chart variable
    long long v; // valuation at the point; nonzero by contract
    std::vector<std::pair<std::string, std::string>> notes;
};

inline LocalWeight weight_series(const WeightFunction& w, long long order) {
    LocalWeight out;
    QSeries r, q;
    if (w.point) {
        r = local_series(w.R, *w.point, order);
        q = w.Q.is_zero() ? QSeries() : local_series(w.Q, *w.point, order);
    } else {
        r = infinity_series(w.R, order);
        q = w.Q.is_zero() ? QSeries() : infinity_series(w.Q, order);
    }
    if (w.R.is_zero() || r.is_degenerate()) throw BadWeight("weight: rational part vanishes");
    if (!q.is_degenerate()) {
        if (q.valuation() < 0)
            throw BadWeight("weight: exponential part must be regular at the expansion point");
        Rational q0 = q.coeff_known(0) ? q.coeff(0) : Rational(0);
        if (!q0.is_zero()) {
            q = q - QSeries::monomial(q0, 0);
            out.notes.emplace_back("omitted-exponential-constant",
                                   "exp(" + q0.str() + ") per power of the weight");
        }
        out.f = r * q.truncated(order).exp();
    } else {
        out.f = r;
    }
    out.v = out.f.valuation();
    if (out.v == 0)
        throw BadWeight("weight: zero valuation at the expansion point (not a local parameter)");
    return out;
}

// Local series of the 1-form y dx in the chart at p (including the chart
// Jacobian for the infinity chart).
inline QSeries disc_form_series(const SpectralCurve& c, const std::optional<Rational>& p,
                                long long order) {
    RationalFunction ydx = c.y_dx();
    if (p) return local_series(ydx, *p, order);
    return -infinity_series(ydx, order + 2).times_power(-2);
}

inline Rational residue_with(const QSeries& form, const QSeries& fpow) {
    long long ord =
        std::min(sat_add(form.order(), fpow.valuation()), sat_add(fpow.order(), form.valuation()));
    if (ord <= -1) throw OrderUnderflow("expansion residue not certified", -ord + 2);
    Rational r(0);
    for (long long e = form.valuation(); e < form.coeff_end(); ++e) {
        Rational b = fpow.at(-1 - e);
        if (!b.is_zero()) r += form.at(e) * b;
    }
    return r;
}

} // namespace detail

// --- Lagrange inversion: stable correlator tensors --------------------------

// A~_{k_1..k_n} = Res...Res omega Prod f(z_i)^{k_i} over the window
// [kmin, kmax] per slot (the same weight at every slot).
inline ExpansionReport expand_at_point(Engine& eng, const CorrelatorTensor& t,
                                       const WeightFunction& w, long long kmin, long long kmax) {
    ExpansionReport rep;
    rep.kind = "lagrange";
    long n = t.n();
    for (int attempt = 0;; ++attempt) {
        try {
            rep.values.clear();
            long long span = (std::max(std::abs(kmin), std::abs(kmax)) + 2);
            long long order =
                eng.current_order() + t.max_pole_order() + 4 * span + 8;
            detail::LocalWeight lw = detail::weight_series(w, order);
            rep.notes = lw.notes;

            // Per-slot residue factors: r[b][k] = Res(form_b * f^k).
            std::map<BasisForm, std::map<long long, Rational>> fac;
            std::map<long long, QSeries> fpow;
            auto fpow_at = [&](long long k) -> const QSeries& {
                auto it = fpow.find(k);
                if (it != fpow.end()) return it->second;
                return fpow.emplace(k, lw.f.pow(static_cast<long>(k))).first->second;
            };
            auto factor = [&](const BasisForm& b, long long k) {
                auto it = fac.find(b);
                if (it == fac.end()) it = fac.emplace(b, std::map<long long, Rational>{}).first;
                auto jt = it->second.find(k);
                if (jt != it->second.end()) return jt->second;
                QSeries form = eng.basis_local_series(b, w.point, order);
                Rational r = detail::residue_with(form, fpow_at(k));
                it->second.emplace(k, r);
                return r;
            };

            std::vector<long long> k(static_cast<std::size_t>(n), kmin);
            for (const auto& [key, c] : t.entries()) {
                std::vector<BasisForm> perm = key;
                do {
                    std::function<void(std::size_t, Rational)> walk = [&](std::size_t j,
                                                                          Rational acc) {
                        if (acc.is_zero()) return;
                        if (j == perm.size()) {
                            auto it = rep.values.find(k);
                            if (it == rep.values.end()) {
                                rep.values.emplace(k, acc);
                            } else {
                                it->second += acc;
                                if (it->second.is_zero()) rep.values.erase(it);
                            }
                            return;
                        }
                        for (long long kk = kmin; kk <= kmax; ++kk) {
                            k[j] = kk;
                            walk(j + 1, acc * factor(perm[j], kk));
                        }
                    };
                    walk(0, c);
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
            return rep;
        } catch (const OrderUnderflow&) {
            if (attempt >= 6) throw;
            eng.ensure_order(2 * eng.current_order());
        }
    }
}

// --- Disc moments ------------------------------------------------------------

// Coefficients of f^{-k-1} df in the disc amplitude y dx.
inline ExpansionReport expand_disc(Engine& eng, const WeightFunction& w, long long kmin,
                                   long long kmax) {
    ExpansionReport rep;
    rep.kind = "disc-moments";
    for (int attempt = 0;; ++attempt) {
        try {
            rep.values.clear();
            long long span = std::max(std::abs(kmin), std::abs(kmax)) + 2;
            long long order = eng.current_order() + 4 * span + 8;
            detail::LocalWeight lw = detail::weight_series(w, order);
            rep.notes = lw.notes;
            QSeries form = detail::disc_form_series(eng.curve(), w.point, order);
            Rational vinv = Rational(static_cast<long>(lw.v)).inv();
            for (long long k = kmin; k <= kmax; ++k) {
                Rational r =
                    detail::residue_with(form, lw.f.pow(static_cast<long>(k))) * vinv;
                if (!r.is_zero()) rep.values.emplace(std::vector<long long>{k}, r);
            }
            return rep;
        } catch (const OrderUnderflow&) {
            if (attempt >= 6) throw;
            eng.ensure_order(2 * eng.current_order());
        }
    }
}

// --- Bergman kernel re-expansion ----------------------------------------------

// A~_{k1,k2} = Res_{z2->p2} Res_{z1->p1} B(z1,z2) f1^{k1} f2^{k2} for the
// closed-form omega_2^(0) = dz1 dz2/(z1-z2)^2, at finite expansion points.
inline ExpansionReport expand_bergman(Engine& eng, const WeightFunction& w1,
                                      const WeightFunction& w2, long long kmin, long long kmax) {
    if (!w1.point || !w2.point)
        throw BadWeight("bergman expansion: finite expansion points only");
    (void)eng;
    ExpansionReport rep;
    rep.kind = "bergman";
    long long span = std::max(std::abs(kmin), std::abs(kmax)) + 2;
    long long order = 4 * span + 12;
    detail::LocalWeight f1 = detail::weight_series(w1, order);
    detail::LocalWeight f2 = detail::weight_series(w2, order);
    rep.notes = f1.notes;
    rep.notes.insert(rep.notes.end(), f2.notes.begin(), f2.notes.end());

    using Inner = QSeries;
    using Big = QQSeries; // series in s2 over series in s1
    Rational c = *w1.point - *w2.point;
    Inner a = (Inner::monomial(c, 0) + Inner::monomial(Rational(1), 1)).truncated(order);
    if (c.is_zero() && kmin < 0)
        throw BadWeight("bergman expansion: coincident points need distinct charts");
    Big den = Big::monomial(a, 0) - Big::monomial(Inner::monomial(Rational(1), 0), 1);
    Big kernel = den.truncated(order).inverse().pow(2); // 1/(c + s1 - s2)^2

    std::map<long long, Big> f2pow;
    auto embed = [](const QSeries& f) {
        std::vector<Inner> cs;
        for (long long e = f.valuation(); e < f.coeff_end(); ++e)
            cs.push_back(Inner::monomial(f.at(e), 0));
        return Big(f.valuation(), std::move(cs), f.order());
    };
    for (long long k2 = kmin; k2 <= kmax; ++k2) {
        Big prod = kernel * embed(f2.f.pow(static_cast<long>(k2)));
        Inner inner_res = prod.coeff(-1); // Res in s2
        for (long long k1 = kmin; k1 <= kmax; ++k1) {
            Rational v = detail::residue_with(inner_res, f1.f.pow(static_cast<long>(k1)));
            if (!v.is_zero()) rep.values.emplace(std::vector<long long>{k1, k2}, v);
        }
    }
    return rep;
}

// --- Decomposition on the B_{a,k} basis --------------------------------------

// B_{a,k}(z) = Res_{z'->a} B(z,z') (x(z')-x(a))^{-k-1/2}: a rational form with
// a single pole at a; leading behaviour (2k+1) dz/z^{2k+2} in z = sqrt(X).
struct BBasisForm {
    int bp;
    int k;
    std::map<int, Rational> pole_coeffs; // m -> coefficient of dz/(z-a)^m
};

inline BBasisForm b_basis_form(Engine& eng, int bp, int k) {
    const BranchFrame& fr = eng.frame(bp, Engine::default_order(0, 3) + 2 * k + 4);
    QSeries z = fr.X.truncated(std::max<long long>(2 * k + 4, fr.order)).sqrt();
    QSeries zm = z.pow(static_cast<long>(-2 * k - 1));
    BBasisForm out{bp, k, {}};
    for (int j = 0; j <= 2 * k; ++j) {
        Rational c = Rational(j + 1) * zm.coeff(-1 - j);
        if (!c.is_zero()) out.pole_coeffs[j + 2] = c;
    }
    return out;
}

struct BBasisDecomposition {
    ExpansionReport report;            // values keyed by per-slot (bp, k) pairs flattened
    std::vector<Rational> sqrt_leading; // per branch point: q with X ~ q^2 s^2
};

// Rewrites a stable tensor over the B_{a,k} forms; exact, and the change of
// basis must consume the tensor completely (nonzero remainder is an error).
inline BBasisDecomposition basis_decomposition(Engine& eng, const CorrelatorTensor& t) {
    long g = t.g(), n = t.n();
    int K = static_cast<int>(3 * g - 3 + n);
    std::size_t nbp = eng.curve().branch_points().size();

    BBasisDecomposition out;
    out.report.kind = "b-basis";
    for (std::size_t i = 0; i < nbp; ++i) {
        const BranchFrame& fr = eng.frame(static_cast<int>(i));
        Rational q;
        if (!fr.X.coeff(2).sqrt_exact(q))
            throw NotASquare("branch point " + eng.curve().branch_points()[i].str() +
                             ": X leading coefficient " + fr.X.coeff(2).str() +
                             " is not a rational square");
        out.sqrt_leading.push_back(q);
        out.report.notes.emplace_back(
            "sqrt-normalization[" + eng.curve().branch_points()[i].str() + "]", q.str());
    }

    // Change matrices per branch point.
    std::vector<std::vector<BBasisForm>> forms(nbp);
    for (std::size_t i = 0; i < nbp; ++i)
        for (int k = 0; k <= K; ++k) forms[i].push_back(b_basis_form(eng, static_cast<int>(i), k));

    // Iteratively substitute slot by slot. Keys: per-slot labels, first the
    // untransformed (bp, m) forms, becoming (bp, k) B-labels (encoded with
    // m-field = -(k+1)) as slots are processed.
    using Key = std::vector<BasisForm>;
    std::map<Key, Rational> work;
    for (const auto& [key, c] : t.entries()) {
        std::vector<BasisForm> perm = key;
        do {
            work[perm] += c;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    // (accumulated duplicates: each ordered tuple appears once)

    for (long slot = 0; slot < n; ++slot) {
        std::map<Key, Rational> next;
        // Group by the other slots; solve triangularly in this slot.
        std::map<Key, std::map<BasisForm, Rational>> grouped;
        for (const auto& [key, c] : work) {
            Key rest = key;
            BasisForm mine = rest[static_cast<std::size_t>(slot)];
            rest.erase(rest.begin() + slot);
            grouped[rest][mine] += c;
        }
        for (auto& [rest, column] : grouped) {
            for (int i = 0; i < static_cast<int>(nbp); ++i) {
                for (int k = K; k >= 0; --k) {
                    const BBasisForm& bf = forms[static_cast<std::size_t>(i)]
                                                 [static_cast<std::size_t>(k)];
                    Rational lead = bf.pole_coeffs.at(2 * k + 2);
                    auto it = column.find(BasisForm{i, 2 * k + 2});
                    if (it == column.end()) continue;
                    Rational a = it->second / lead;
                    if (a.is_zero()) continue;
                    for (const auto& [m, cm] : bf.pole_coeffs) {
                        auto jt = column.find(BasisForm{i, m});
                        Rational nv = (jt == column.end() ? Rational(0) : jt->second) - a * cm;
                        if (nv.is_zero()) {
                            if (jt != column.end()) column.erase(jt);
                        } else if (jt == column.end()) {
                            column.emplace(BasisForm{i, m}, nv);
                        } else {
                            jt->second = nv;
                        }
                    }
                    Key nk = rest;
                    nk.insert(nk.begin() + slot, BasisForm{i, -(k + 1)});
                    next[nk] += a;
                }
            }
            if (!column.empty()) {
                throw std::logic_error(
                    "basis_decomposition: tensor is not in the span of the B forms "
                    "(leftover pole order " +
                    std::to_string(column.begin()->first.m) + ")");
            }
        }
        work = std::move(next);
    }

    // Canonical report: sorted slot labels, index tuple flattened as
    // (bp_1, k_1, bp_2, k_2, ...). The ordered coefficient appears once.
    std::map<std::vector<long long>, Rational> canon;
    for (const auto& [key, c] : work) {
        Key sorted = key;
        std::sort(sorted.begin(), sorted.end());
        std::vector<long long> idx;
        for (const auto& b : sorted) {
            idx.push_back(b.bp);
            idx.push_back(-b.m - 1); // decode back to k
        }
        auto it = canon.find(idx);
        if (it == canon.end()) {
            canon.emplace(idx, c);
        } else if (it->second != c) {
            throw std::logic_error("basis_decomposition: asymmetric coefficients");
        }
    }
    out.report.values = std::move(canon);
    for (const auto& [idx, v] : out.report.values) {
        for (std::size_t j = 1; j < idx.size(); j += 2)
            if (idx[j] < 0 || idx[j] > K)
                throw std::logic_error("basis_decomposition: index outside [0, 3g-3+n]");
    }
    return out;
}

// --- Kontsevich times and dual times -----------------------------------------

struct TimesReport {
    ExpansionReport report; // t_{2k+1} keyed by {2k+1}
    Rational lambda;        // rescale y -> lambda y that sets dY = 2z + ...
    Rational q;             // sqrt normalization of X
    bool all_zero;
};

inline TimesReport extract_times(Engine& eng, int bp, int kmax = 8) {
    long long need = std::max<long long>(2 * kmax + 6, Engine::default_order(0, 3));
    const BranchFrame& fr = eng.frame(bp, need);
    TimesReport out;
    out.report.kind = "times";
    Rational q;
    if (!fr.X.coeff(2).sqrt_exact(q))
        throw NotASquare("branch point " + fr.a.str() + ": X leading coefficient " +
                         fr.X.coeff(2).str() + " is not a rational square");
    out.q = q;
    QSeries z = fr.X.sqrt();           // z(s), odd under sigma
    QSeries s_of_z = z.reverted();     // s(z)
    QSeries dy_z = QSeries::compose(fr.dY, s_of_z);
    Rational c1 = dy_z.coeff(1);
    out.lambda = Rational(2) / c1;
    out.all_zero = true;
    // lambda * dY = 2z - sum t_{2k+1} z^{2k-1}; t_1 = 0 and t_3 = 0 by the
    // normalization, higher odd coefficients give the times.
    for (long long e = 2; e < std::min<long long>(dy_z.order(), 2 * kmax); ++e) {
        Rational ce = dy_z.coeff(e) * out.lambda;
        if (e % 2 == 0) {
            if (!ce.is_zero())
                throw std::logic_error("extract_times: even coefficient survived in z");
            continue;
        }
        Rational tk = -ce; // coefficient of z^{2k-1} with 2k+1 = e+2
        if (!tk.is_zero()) {
            out.report.values.emplace(std::vector<long long>{e + 2}, tk);
            out.all_zero = false;
        }
    }
    out.report.notes.emplace_back("lambda", out.lambda.str());
    out.report.notes.emplace_back("sqrt-normalization", out.q.str());
    return out;
}

// Dual times: f(z) = sum_{a>=1} ((2a+1)!/a!) t_{2a+3}/(2-t_3) z^a and
// t~(z) = -log(1 - f(z)); t_1 = 0 is enforced, 2 - t_3 = 2 exp(-t~_0).
inline ExpansionReport dual_times(const ExpansionReport& times, int bmax = 8) {
    ExpansionReport out;
    out.kind = "dual-times";
    Rational t3 = times.at(3);
    Rational denom = Rational(2) - t3;
    if (denom.is_zero()) throw std::domain_error("dual_times: t_3 = 2 is singular");
    std::vector<Rational> fc(static_cast<std::size_t>(bmax) + 1, Rational(0));
    bool any = false;
    for (long a = 1; a <= bmax; ++a) {
        Rational t = times.at(2 * a + 3);
        if (t.is_zero()) continue;
        fc[static_cast<std::size_t>(a)] = factorial(2 * a + 1) / factorial(a) * t / denom;
        any = true;
    }
    out.notes.emplace_back("exp(-dual_t0)", (denom / Rational(2)).str());
    if (!any) return out; // all dual times vanish
    QSeries f(1, std::vector<Rational>(fc.begin() + 1, fc.end()), bmax + 1);
    QSeries tt = -(QSeries::monomial(Rational(1), 0).truncated(bmax + 1) - f).log();
    for (long long b = 1; b <= bmax; ++b) {
        Rational v = tt.coeff_known(b) ? tt.coeff(b) : Rational(0);
        if (!v.is_zero()) out.values.emplace(std::vector<long long>{b}, v);
    }
    return out;
}

// --- Intersection numbers (single branch point, all times zero) --------------

// W_n^(g) = 2^{-(3g-3+n)} 2^{2-2g-n} sum_{|d|=3g-3+n} prod ((2d_i+1)!/d_i!)
//           dz_i / z_i^{2d_i+2} <prod psi^{d_i}>, inverted for the bracket.
inline ExpansionReport intersection_numbers(Engine& eng, long g, long n) {
    if (eng.curve().branch_points().size() != 1)
        throw std::domain_error("intersection numbers need exactly one branch point");
    if (!is_stable(g, n)) throw UnstableRequest("intersection numbers need stable (g,n)");
    TimesReport times = extract_times(eng, 0, static_cast<int>(3 * g + n + 4));
    if (!times.all_zero)
        throw std::domain_error(
            "intersection numbers: nonzero Kontsevich times (mixing is out of scope)");

    const CorrelatorTensor& t = eng.omega(g, n);
    long K = 3 * g - 3 + n;
    long long need = eng.current_order() + 2 * K + 6;
    const BranchFrame& fr = eng.frame(0, need);
    QSeries z = fr.X.sqrt();
    QSeries s_of_z = z.reverted();
    QSeries ds_dz = s_of_z.derivative();

    // L_m(z) = s'(z) s(z)^{-m}; collect certified coefficients on
    // [-2K-2, 2) and require everything off the even principal lattice to
    // cancel in the tensor.
    std::map<int, QSeries> L;
    for (const auto& [key, c] : t.entries())
        for (const auto& b : key)
            if (!L.count(b.m)) L.emplace(b.m, ds_dz * s_of_z.pow(static_cast<long>(-b.m)));

    std::map<std::vector<long long>, Rational> zrep; // exponent tuples in z
    for (const auto& [key, c] : t.entries()) {
        std::vector<BasisForm> perm = key;
        do {
            std::vector<long long> idx(perm.size());
            std::function<void(std::size_t, Rational)> walk = [&](std::size_t j, Rational acc) {
                if (acc.is_zero()) return;
                if (j == perm.size()) {
                    auto it = zrep.find(idx);
                    if (it == zrep.end()) {
                        zrep.emplace(idx, acc);
                    } else {
                        it->second += acc;
                        if (it->second.is_zero()) zrep.erase(it);
                    }
                    return;
                }
                const QSeries& s = L.at(perm[j].m);
                for (long long e = s.valuation(); e < 2; ++e) {
                    if (!s.coeff_known(e))
                        throw OrderUnderflow("intersection window not certified", e + 1);
                    idx[j] = e;
                    walk(j + 1, acc * s.at(e));
                }
            };
            walk(0, c);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    ExpansionReport out;
    out.kind = "intersection";
    out.notes = times.report.notes;
    Rational pref_base = Rational(2).pow(-(3 * g - 3 + n)) * Rational(2).pow(2 - 2 * g - n) *
                         times.lambda.pow(2 - 2 * g - n).inv();
    // lambda^{2-2g-n} multiplies omega to give the normalized curve's forms;
    // dividing by the prefactor then isolates the bracket.
    for (const auto& [idx, v] : zrep) {
        std::vector<long long> d(idx.size());
        long long total = 0;
        bool principal = true;
        for (std::size_t j = 0; j < idx.size(); ++j) {
            long long e = idx[j];
            if (e >= 0 || e % 2 != 0) {
                principal = false;
                break;
            }
            d[j] = (-e - 2) / 2;
            if (d[j] < 0) {
                principal = false;
                break;
            }
            total += d[j];
        }
        if (!principal || total != K)
            throw std::logic_error("intersection_numbers: non-principal z-coefficient survived");
        Rational pref = pref_base;
        for (std::size_t j = 0; j < d.size(); ++j)
            pref *= factorial(2 * d[j] + 1) / factorial(d[j]);
        std::vector<long long> dd = d;
        std::sort(dd.begin(), dd.end());
        Rational bracket = v / pref;
        auto it = out.values.find(dd);
        if (it == out.values.end()) {
            out.values.emplace(dd, bracket);
        } else if (it->second != bracket) {
            throw std::logic_error("intersection_numbers: inconsistent bracket extraction");
        }
    }
    return out;
}

} // namespace trec
