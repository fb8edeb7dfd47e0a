#pragma once

// The topological recursion over a genus-0 spectral curve.
//
// All residues are taken in the coordinate s = z - a at each branch point a.
// The conjugate point zbar is a + sigma(s) and forms evaluated there pick up
// the Jacobian sigma'(s). The recursion kernel's dependence on the free slot
// z0 is expanded as
//
//   K(z0, a+s) = dz0/ds * P(s) * sum_{m>=1} (sigma(s)^m - s^m) / (z0-a)^{m+1},
//   P(s) = 1 / (2 (y(a+s) - y(a+sigma(s))) rho(a+s)),
//
// so one residue per (branch point, pole order, slot assignment) lands
// directly in the partial-fraction tensor basis. The m = 0 family cancels
// identically, which is why stable correlators have vanishing residues.
//
// Slot-1 is distinguished by the recursion; symmetry of the output is
// verified afterwards, not imposed.

#include "trec/curve.hpp"
#include "trec/tensor.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trec {

struct UnstableRequest : std::runtime_error {
    explicit UnstableRequest(const std::string& m) : std::runtime_error(m) {}
};

inline bool is_stable(long g, long n) { return g >= 0 && n >= 1 && 2 - 2 * g - n < 0; }

// Local s-series of the recursion kernel, one family per target pole order.
struct KernelExpansion {
    Rational a;
    int max_pole_order;
    std::vector<QSeries> families; // families[m-2] multiplies dz0/(z0-a)^m, m = 2..max_pole_order

    const QSeries& family(int pole_order) const {
        return families.at(static_cast<std::size_t>(pole_order - 2));
    }
};

// Exact multi-variable Laurent window of a correlator at chosen expansion
// points (per-slot local coordinates; nullopt point means the 1/z chart).
struct LocalExpansion {
    std::vector<long long> lo, hi; // per-slot exponent window [lo, hi)
    std::map<std::vector<long long>, Rational> coeffs;

    Rational coeff(const std::vector<long long>& e) const {
        auto it = coeffs.find(e);
        return it == coeffs.end() ? Rational(0) : it->second;
    }
};

struct EngineOptions {
    bool parallel = false;
    long long order_floor = 0; // raise the automatic frame order choice
};

class Engine {
public:
    explicit Engine(SpectralCurve curve, EngineOptions opt = {})
        : curve_(std::move(curve)), opt_(opt), order_(0) {}

    const SpectralCurve& curve() const { return curve_; }
    long long current_order() const { return order_; }

    // omega_1^(0) = -y dx (coefficient of dz); the potential Phi integrates
    // +y dx, exactly as both are defined.
    RationalFunction omega10_form() const { return -curve_.y_dx(); }

    const std::vector<BranchFrame>& frames(long long at_least = 0) {
        ensure_order(at_least);
        return frames_;
    }

    const BranchFrame& frame(int bp, long long at_least = 0) {
        ensure_order(at_least);
        return frames_[static_cast<std::size_t>(bp)];
    }

    void ensure_order(long long o) {
        o = std::max({o, opt_.order_floor, static_cast<long long>(8)});
        if (o <= order_) return;
        frames_.clear();
        for (const auto& a : curve_.branch_points()) frames_.push_back(build_frame(curve_, a, o));
        order_ = o;
    }

    static long long default_order(long g, long n) { return 6 * g - 2 + 2 * n + 4; }

    // The stable correlator tensor; unstable (g,n) are served by the closed
    // forms, never by this representation.
    const CorrelatorTensor& omega(long g, long n) {
        if (!is_stable(g, n))
            throw UnstableRequest("omega(" + std::to_string(g) + "," + std::to_string(n) +
                                  ") is unstable; use the closed-form accessors");
        auto it = memo_.find({g, n});
        if (it != memo_.end()) return it->second;
        ensure_order(default_order(g, n));
        for (int attempt = 0;; ++attempt) {
            try {
                CorrelatorTensor t = compute_omega(g, n);
                return memo_.emplace(std::make_pair(g, n), std::move(t)).first->second;
            } catch (const OrderUnderflow&) {
                if (attempt >= 6) throw;
                ensure_order(2 * order_);
            }
        }
    }

    // F_g = (1/(2-2g)) sum_i Res_{s->0} omega_1^(g)(a_i+s) Phi_i(s), g >= 2.
    Rational fg(long g) {
        if (g < 2)
            throw UnstableRequest("F_" + std::to_string(g) +
                                  " is outside the stable range (needs g >= 2)");
        const CorrelatorTensor& w = omega(g, 1);
        for (int attempt = 0;; ++attempt) {
            try {
                Rational acc(0);
                for (const auto& [key, c] : w.entries()) {
                    const BasisForm& b = key[0];
                    acc += c * phi_coefficient(b.bp, b.m - 1);
                }
                return acc / Rational(2 - 2 * g);
            } catch (const OrderUnderflow&) {
                if (attempt >= 6) throw;
                ensure_order(2 * order_);
            }
        }
    }

    // [s^k] Phi at branch point bp (also used by the dilaton contraction).
    Rational phi_coefficient(int bp, long long k) {
        ensure_order(std::max<long long>(k + 2, 8));
        return frames_[static_cast<std::size_t>(bp)].Phi.coeff(k);
    }

    struct DilatonCheck {
        CorrelatorTensor lhs, rhs, difference;
        bool holds;
    };

    // (2g+n-2) omega_n^(g) = sum_i Res_{z->a_i} omega_{n+1}^(g)(...,z) Phi(z).
    DilatonCheck dilaton(long g, long n) {
        if (!is_stable(g, n) || !is_stable(g, n + 1))
            throw UnstableRequest("dilaton check needs stable (g,n) and (g,n+1)");
        CorrelatorTensor lhs = omega(g, n).scaled(Rational(2 * g + n - 2));
        const CorrelatorTensor& big = omega(g, n + 1);
        CorrelatorTensor rhs(g, n, tensor_bps());
        for (const auto& [key, c] : big.entries()) {
            // Contract each slot occurrence of the sorted key against Phi.
            // The ordered-coefficient semantics make this the residue in the
            // last slot: distinct values only, no multiplicities.
            for (std::size_t j = 0; j < key.size(); ++j) {
                if (j && key[j] == key[j - 1]) continue;
                std::vector<BasisForm> rest;
                rest.reserve(key.size() - 1);
                for (std::size_t t = 0; t < key.size(); ++t)
                    if (t != j) rest.push_back(key[t]);
                rhs.add(std::move(rest), c * phi_coefficient(key[j].bp, key[j].m - 1));
            }
        }
        CorrelatorTensor diff = lhs - rhs;
        return {std::move(lhs), std::move(rhs), diff, diff.empty()};
    }

    // Kernel expansion at a branch point, exposed for direct checks.
    KernelExpansion kernel_expansion(int bp, int max_pole_order) {
        ensure_order(default_order(1, 1));
        for (int attempt = 0;; ++attempt) {
            try {
                BpWork w(*this, bp);
                KernelExpansion ke{curve_.branch_points()[static_cast<std::size_t>(bp)],
                                   max_pole_order,
                                   {}};
                for (int m = 1; m + 1 <= max_pole_order; ++m) ke.families.push_back(w.kappa(m));
                return ke;
            } catch (const OrderUnderflow&) {
                if (attempt >= 6) throw;
                ensure_order(2 * order_);
            }
        }
    }

    // Exact local expansion of a stable tensor; per-slot expansion points.
    LocalExpansion evaluate_local(const CorrelatorTensor& t,
                                  const std::vector<std::optional<Rational>>& points,
                                  long long window) {
        if (static_cast<long>(points.size()) != t.n())
            throw std::invalid_argument("evaluate_local: one expansion point per slot");
        LocalExpansion out;
        long long need = window + t.max_pole_order() + 2;
        ensure_order(need);
        std::map<std::pair<BasisForm, std::size_t>, QSeries> cache;
        auto slot_series = [&](const BasisForm& b, std::size_t slot) -> const QSeries& {
            auto key = std::make_pair(b, slot);
            auto it = cache.find(key);
            if (it != cache.end()) return it->second;
            return cache.emplace(key, basis_local_series(b, points[slot], window)).first->second;
        };
        out.lo.assign(points.size(), 0);
        out.hi.assign(points.size(), 0);
        bool first = true;
        for (const auto& [key, c] : t.entries()) {
            std::vector<BasisForm> perm = key;
            do {
                std::vector<long long> lo(points.size()), hi(points.size());
                for (std::size_t j = 0; j < perm.size(); ++j) {
                    const QSeries& s = slot_series(perm[j], j);
                    lo[j] = s.valuation();
                    hi[j] = std::min(s.order(), window);
                }
                if (first) {
                    out.lo = lo;
                    out.hi = hi;
                    first = false;
                } else {
                    for (std::size_t j = 0; j < points.size(); ++j) {
                        out.lo[j] = std::min(out.lo[j], lo[j]);
                        out.hi[j] = std::min(out.hi[j], hi[j]);
                    }
                }
                std::vector<long long> idx(points.size());
                std::function<void(std::size_t, Rational)> walk = [&](std::size_t j, Rational acc) {
                    if (acc.is_zero()) return;
                    if (j == perm.size()) {
                        auto it = out.coeffs.find(idx);
                        if (it == out.coeffs.end()) {
                            out.coeffs.emplace(idx, acc);
                        } else {
                            it->second += acc;
                            if (it->second.is_zero()) out.coeffs.erase(it);
                        }
                        return;
                    }
                    const QSeries& s = slot_series(perm[j], j);
                    for (long long e = s.valuation(); e < std::min(s.order(), window); ++e) {
                        idx[j] = e;
                        walk(j + 1, acc * s.at(e));
                    }
                };
                walk(0, c);
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        return out;
    }

    // dz/(z-a)^m expanded at a point (or in the 1/z chart at infinity),
    // including the chart Jacobian.
    QSeries basis_local_series(const BasisForm& b, const std::optional<Rational>& point,
                               long long window) {
        const Rational a = curve_.branch_points()[static_cast<std::size_t>(b.bp)];
        if (!point) {
            // z = 1/w: dz/(z-a)^m = -w^{m-2} (1-aw)^{-m} dw
            Polynomial lin{Rational(1), -a};
            QSeries inv = to_series(lin).truncated(window + b.m + 2).inverse().pow(b.m);
            return -inv.times_power(b.m - 2);
        }
        if (*point == a) return QSeries::monomial(Rational(1), -b.m);
        Polynomial den = Polynomial::one();
        for (int i = 0; i < b.m; ++i) den = den * Polynomial{-a, Rational(1)};
        return local_series(RationalFunction(Polynomial::one(), den), *point, window);
    }

    std::vector<Rational> tensor_bps() const { return curve_.branch_points(); }

    bool parallel() const { return opt_.parallel; }

private:
    // Per-branch-point series workspace for one correlator computation.
    struct BpWork {
        Engine& eng;
        int i;
        const BranchFrame& fr;
        QSeries P;           // 1/(2 dY rho)
        QSeries sigma_prime; // dsigma/ds
        std::vector<QSeries> sigma_pows;
        std::map<int, QSeries> kappas;
        std::map<std::pair<int, int>, QSeries> fz_, fzbar_;
        std::map<int, QSeries> genz_, genzbar_;
        std::map<std::pair<int, int>, std::map<std::pair<int, int>, QSeries>> prod_;

        BpWork(Engine& e, int bp)
            : eng(e), i(bp), fr(e.frames_[static_cast<std::size_t>(bp)]) {
            P = (fr.dY * fr.rho_loc).mul_long(2).inverse();
            sigma_prime = fr.sigma.derivative();
            sigma_pows = {QSeries::monomial(Rational(1), 0), fr.sigma};
        }

        const QSeries& sigma_pow(int k) {
            while (static_cast<int>(sigma_pows.size()) <= k)
                sigma_pows.push_back(sigma_pows.back() * fr.sigma);
            return sigma_pows[static_cast<std::size_t>(k)];
        }

        const QSeries& kappa(int m) {
            auto it = kappas.find(m);
            if (it != kappas.end()) return it->second;
            QSeries diff = sigma_pow(m) - QSeries::monomial(Rational(1), m);
            return kappas.emplace(m, P * diff).first->second;
        }

        // Slot labels: kind 0 = basis form evaluated at z; kind 1 = basis
        // form at zbar (with Jacobian); kind 2 = generating B-label at z;
        // kind 3 = generating B-label at zbar.
        using Key = std::pair<int, int>; // encodes (kind, payload)

        static Key eval_key(bool bar, const BasisForm& b) {
            return {bar ? 1 : 0, b.bp * 4096 + b.m};
        }
        static Key gen_key(bool bar, int j) { return {bar ? 3 : 2, j}; }

        const QSeries& series_for(const Key& k) {
            auto [kind, payload] = k;
            if (kind == 0 || kind == 1) {
                BasisForm b{payload / 4096, payload % 4096};
                auto& cache = (kind == 0) ? fz_ : fzbar_;
                auto it = cache.find({b.bp, b.m});
                if (it != cache.end()) return it->second;
                QSeries base;
                if (b.bp == i) {
                    base = QSeries::monomial(Rational(1), -b.m);
                } else {
                    const Rational c = eng.curve_.branch_points()[static_cast<std::size_t>(b.bp)];
                    const Rational ai = eng.curve_.branch_points()[static_cast<std::size_t>(i)];
                    Polynomial lin{ai - c, Rational(1)};
                    base =
                        to_series(lin).truncated(eng.order_ + b.m + 2).inverse().pow(b.m);
                }
                if (kind == 1) base = sigma_prime * QSeries::compose(base, fr.sigma);
                return cache.emplace(std::make_pair(b.bp, b.m), std::move(base)).first->second;
            }
            auto& cache = (kind == 2) ? genz_ : genzbar_;
            auto it = cache.find(payload);
            if (it != cache.end()) return it->second;
            QSeries s = (kind == 2)
                            ? QSeries::monomial(Rational(payload + 1), payload)
                            : (sigma_prime * sigma_pow(payload)).mul_long(payload + 1);
            return cache.emplace(payload, std::move(s)).first->second;
        }

        // [s^-1](kappa_m * F * G) with the product cached per (F, G).
        Rational residue(int m, const Key& fk, const Key& gk) {
            auto& slot = prod_[fk];
            auto it = slot.find(gk);
            if (it == slot.end()) it = slot.emplace(gk, series_for(fk) * series_for(gk)).first;
            return residue_of_product(kappa(m), it->second);
        }
    };

    static Rational residue_of_product(const QSeries& a, const QSeries& b) {
        long long ord = std::min(sat_add(a.order(), b.valuation()), sat_add(b.order(), a.valuation()));
        if (ord <= -1)
            throw OrderUnderflow("residue of product not certified", -ord + 2);
        Rational r(0);
        for (long long e = a.valuation(); e < a.coeff_end(); ++e) {
            Rational be = b.at(-1 - e);
            if (!be.is_zero()) r += a.at(e) * be;
        }
        return r;
    }

    // ---- multiset helpers over sorted BasisForm vectors ----
    static std::vector<BasisForm> multiset_minus(const std::vector<BasisForm>& m,
                                                 const BasisForm& x, const BasisForm& y) {
        std::vector<BasisForm> r;
        r.reserve(m.size() - 2);
        bool sx = false, sy = false;
        for (const auto& v : m) {
            if (!sx && v == x) {
                sx = true;
                continue;
            }
            if (!sy && v == y) {
                sy = true;
                continue;
            }
            r.push_back(v);
        }
        return r;
    }

    static Rational merge_multiplicity(const std::vector<BasisForm>& a,
                                       const std::vector<BasisForm>& b) {
        // Number of ways to choose positions for a inside the merged multiset.
        Rational f(1);
        std::size_t ia = 0, ib = 0;
        while (ia < a.size()) {
            BasisForm v = a[ia];
            std::size_t ca = 0, cb = 0;
            while (ia < a.size() && a[ia] == v) {
                ++ia;
                ++ca;
            }
            while (ib < b.size() && b[ib] < v) ++ib;
            while (ib + cb < b.size() && b[ib + cb] == v) ++cb;
            f *= binomial(static_cast<long>(ca + cb), static_cast<long>(ca));
        }
        return f;
    }

    static std::vector<BasisForm> multiset_union(std::vector<BasisForm> a,
                                                 const std::vector<BasisForm>& b) {
        a.insert(a.end(), b.begin(), b.end());
        std::sort(a.begin(), a.end());
        return a;
    }

    // Entries of one recursion factor: evaluated-slot key, remaining labels
    // (sorted), coefficient. Stable tensors decompose per distinct value;
    // omega_2^(0) contributes the generating B-expansion.
    struct FactorEntry {
        BpWork::Key slot;
        std::vector<BasisForm> rest;
        Rational c;
    };

    std::vector<FactorEntry> factor_entries(BpWork& w, long h, long k, bool bar, long jmax) {
        std::vector<FactorEntry> out;
        if (h == 0 && k == 2) {
            for (long j = 0; j <= jmax; ++j)
                out.push_back({BpWork::gen_key(bar, static_cast<int>(j)),
                               {BasisForm{w.i, static_cast<int>(j) + 2}},
                               Rational(1)});
            return out;
        }
        if (!is_stable(h, k)) return out; // vanishing unstable levels
        const CorrelatorTensor& t = omega(h, k);
        for (const auto& [key, c] : t.entries()) {
            for (std::size_t j = 0; j < key.size(); ++j) {
                if (j && key[j] == key[j - 1]) continue;
                std::vector<BasisForm> rest;
                rest.reserve(key.size() - 1);
                for (std::size_t s = 0; s < key.size(); ++s)
                    if (s != j) rest.push_back(key[s]);
                out.push_back({BpWork::eval_key(bar, key[j]), std::move(rest), c});
            }
        }
        return out;
    }

    using RawKey = std::pair<BasisForm, std::vector<BasisForm>>;
    using RawMap = std::map<RawKey, Rational>;

    static void raw_add(RawMap& m, const BasisForm& slot0, std::vector<BasisForm> rest,
                        const Rational& v) {
        if (v.is_zero()) return;
        std::sort(rest.begin(), rest.end());
        RawKey k{slot0, std::move(rest)};
        auto it = m.find(k);
        if (it == m.end()) {
            m.emplace(std::move(k), v);
        } else {
            it->second += v;
            if (it->second.is_zero()) m.erase(it);
        }
    }

    RawMap branch_point_contribution(long g, long N, int bp) {
        BpWork w(*this, bp);
        RawMap out;
        const int Mmax = static_cast<int>(6 * g - 4 + 2 * N);

        auto add_pair = [&](const BpWork::Key& fk, const BpWork::Key& gk,
                            const std::vector<BasisForm>& rest, const Rational& c) {
            if (c.is_zero()) return;
            for (int m = 1; m + 1 <= Mmax; ++m) {
                Rational r = w.residue(m, fk, gk);
                if (!r.is_zero())
                    raw_add(out, BasisForm{bp, m + 1}, rest, c * r);
            }
        };

        // Genus-reducing term omega_{N+1}^{(g-1)}(z, zbar, ...).
        if (g >= 1) {
            if (g == 1 && N == 1) {
                // omega_2^(0)(z, zbar) = sigma'(s) ds^2 / (s - sigma(s))^2
                QSeries diag = w.sigma_prime *
                               (QSeries::monomial(Rational(1), 1) - w.fr.sigma)
                                   .truncated(order_)
                                   .inverse()
                                   .pow(2);
                for (int m = 1; m + 1 <= Mmax; ++m) {
                    Rational r = residue_of_product(w.kappa(m), diag);
                    if (!r.is_zero()) raw_add(out, BasisForm{bp, m + 1}, {}, r);
                }
            } else if (is_stable(g - 1, N + 1)) {
                const CorrelatorTensor& t = memo_.at({g - 1, N + 1});
                for (const auto& [key, c] : t.entries()) {
                    for (std::size_t jx = 0; jx < key.size(); ++jx) {
                        if (jx && key[jx] == key[jx - 1]) continue;
                        for (std::size_t jy = 0; jy < key.size(); ++jy) {
                            if (jy == jx) continue;
                            // skip duplicate (x, y) value pairs
                            bool dup = false;
                            for (std::size_t t2 = 0; t2 < jy; ++t2)
                                if (t2 != jx && key[t2] == key[jy]) {
                                    dup = true;
                                    break;
                                }
                            if (dup) continue;
                            add_pair(BpWork::eval_key(false, key[jx]),
                                     BpWork::eval_key(true, key[jy]),
                                     multiset_minus(key, key[jx], key[jy]), c);
                        }
                    }
                }
            }
        }

        // Splitting terms omega^{(h)}(z, I) omega^{(g-h)}(zbar, J \ I),
        // excluding (h, I) = (0, empty) and (g, J).
        for (long h = 0; h <= g; ++h) {
            for (long k1 = 1; k1 <= N; ++k1) {
                long k2 = N + 1 - k1;
                if (h == 0 && k1 == 1) continue;
                if (g - h == 0 && k2 == 1) continue;
                bool gen1 = (h == 0 && k1 == 2);
                bool gen2 = (g - h == 0 && k2 == 2);
                if (!gen1 && !is_stable(h, k1)) continue;
                if (!gen2 && !is_stable(g - h, k2)) continue;

                std::vector<FactorEntry> f2 = factor_entries(w, g - h, k2, true, Mmax - 2);
                if (f2.empty()) continue;
                long jmax1 = 0;
                if (gen1)
                    for (const auto& e : f2)
                        jmax1 = std::max<long long>(
                            jmax1, -std::min<long long>(0, w.series_for(e.slot).valuation()) + 1);
                std::vector<FactorEntry> f1 = factor_entries(w, h, k1, false, jmax1);
                if (f1.empty()) continue;

                for (const auto& e1 : f1) {
                    for (const auto& e2 : f2) {
                        Rational mult = merge_multiplicity(e1.rest, e2.rest);
                        add_pair(e1.slot, e2.slot, multiset_union(e1.rest, e2.rest),
                                 e1.c * e2.c * mult);
                    }
                }
            }
        }
        return out;
    }

    void ensure_dependencies(long g, long N) {
        if (g >= 1 && is_stable(g - 1, N + 1)) omega(g - 1, N + 1);
        for (long h = 0; h <= g; ++h)
            for (long k1 = 1; k1 <= N; ++k1) {
                long k2 = N + 1 - k1;
                if (is_stable(h, k1) && 2 * h - 2 + k1 < 2 * g - 2 + N) omega(h, k1);
                if (is_stable(g - h, k2) && 2 * (g - h) - 2 + k2 < 2 * g - 2 + N)
                    omega(g - h, k2);
            }
    }

    CorrelatorTensor compute_omega(long g, long N) {
        ensure_dependencies(g, N);
        std::size_t nbp = curve_.branch_points().size();
        std::vector<RawMap> parts(nbp);
        if (opt_.parallel && nbp > 1) {
            std::vector<std::future<RawMap>> futs;
            futs.reserve(nbp);
            for (std::size_t i = 0; i < nbp; ++i)
                futs.push_back(std::async(std::launch::async, [this, g, N, i] {
                    return branch_point_contribution(g, N, static_cast<int>(i));
                }));
            for (std::size_t i = 0; i < nbp; ++i) parts[i] = futs[i].get();
        } else {
            for (std::size_t i = 0; i < nbp; ++i)
                parts[i] = branch_point_contribution(g, N, static_cast<int>(i));
        }
        RawMap raw;
        for (auto& p : parts)
            for (auto& [k, v] : p) {
                auto it = raw.find(k);
                if (it == raw.end()) {
                    raw.emplace(k, v);
                } else {
                    it->second += v;
                    if (it->second.is_zero()) raw.erase(it);
                }
            }

        verify_symmetry(raw, g, N);

        CorrelatorTensor t(g, N, tensor_bps());
        const int Mmax = static_cast<int>(6 * g - 4 + 2 * N);
        for (auto& [k, v] : raw) {
            std::vector<BasisForm> key = k.second;
            key.push_back(k.first);
            for (const auto& b : key)
                if (b.m < 2 || b.m > Mmax)
                    throw std::logic_error("pole order " + std::to_string(b.m) +
                                           " violates the [2, 6g-4+2n] bound");
            // Raw entries carry the ordered coefficient already; merging the
            // distinguished slot into the sorted key must be consistent.
            Rational existing = t.coeff(key);
            if (!existing.is_zero() && existing != v)
                throw std::logic_error("slot-merge inconsistency; recursion output asymmetric");
            if (existing.is_zero()) t.add(std::move(key), v);
        }
        return t;
    }

    // Full permutation check for n <= 3, seeded random transpositions beyond.
    void verify_symmetry(const RawMap& raw, long g, long N) {
        if (N == 1) return;
        auto ordered_coeff = [&](const BasisForm& slot0, const std::vector<BasisForm>& rest) {
            RawKey k{slot0, CorrelatorTensor::canonical(rest)};
            auto it = raw.find(k);
            return it == raw.end() ? Rational(0) : it->second;
        };
        auto check_swap = [&](const RawKey& k) {
            // swap slot0 with each distinct rest value
            const auto& [slot0, rest] = k;
            for (std::size_t j = 0; j < rest.size(); ++j) {
                if (j && rest[j] == rest[j - 1]) continue;
                std::vector<BasisForm> swapped = rest;
                swapped[j] = slot0;
                Rational a = ordered_coeff(slot0, rest);
                Rational b = ordered_coeff(rest[j], swapped);
                if (a != b)
                    throw std::logic_error(
                        "omega(" + std::to_string(g) + "," + std::to_string(N) +
                        ") failed the slot-permutation symmetry check");
            }
        };
        if (N <= 3) {
            for (const auto& [k, v] : raw) check_swap(k);
        } else {
            std::vector<const RawKey*> keys;
            keys.reserve(raw.size());
            for (const auto& [k, v] : raw) keys.push_back(&k);
            if (keys.empty()) return;
            std::mt19937 rng(0x5eedu + static_cast<unsigned>(64 * g + N));
            std::uniform_int_distribution<std::size_t> pick(0, keys.size() - 1);
            for (int t = 0; t < 64; ++t) check_swap(*keys[pick(rng)]);
        }
    }

    SpectralCurve curve_;
    EngineOptions opt_;
    long long order_;
    std::vector<BranchFrame> frames_;
    std::map<std::pair<long, long>, CorrelatorTensor> memo_;
};

} // namespace trec
