#pragma once

// Independent combinatorial checkers used by the verification suites. None
// of them call the recursion engine's residue machinery, except the direct
// two-fold residue formula for omega_2^(1) which deliberately takes a
// different computational route (nested series, innermost residue first).

#include "trec/engine.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trec::oracles {

// ---------------------------------------------------------------------------
// Tutte's disc recursion:
//   -t_2 A_{k+1} = sum_{l=0}^{k-1} A_l A_{k-l-1} + sum_{l != 2} t_l A_{k+l-1}
// Exactly solvable (lower triangular) when no time above t_2 is switched on;
// higher times enter perturbatively via the differentiated recursion below.
// ---------------------------------------------------------------------------

inline std::vector<Rational> tutte_disc(const std::map<long, Rational>& times, const Rational& a0,
                                        int kmax) {
    Rational t2(0), t0(0), t1(0);
    for (const auto& [l, t] : times) {
        if (t.is_zero()) continue;
        if (l == 0) t0 = t;
        else if (l == 1) t1 = t;
        else if (l == 2) t2 = t;
        else
            throw std::domain_error(
                "tutte_disc: time t_" + std::to_string(l) +
                " makes the recursion non-triangular; use tutte_disc_first_order");
    }
    if (t2.is_zero()) throw std::domain_error("tutte_disc: t_2 must be nonzero");
    std::vector<Rational> A(static_cast<std::size_t>(kmax) + 1, Rational(0));
    A[0] = a0;
    for (int k = 0; k + 1 <= kmax; ++k) {
        Rational rhs(0);
        for (int l = 0; l <= k - 1; ++l) rhs += A[static_cast<std::size_t>(l)] *
                                                 A[static_cast<std::size_t>(k - l - 1)];
        if (!t0.is_zero() && k - 1 >= 0) rhs += t0 * A[static_cast<std::size_t>(k - 1)];
        if (!t1.is_zero()) rhs += t1 * A[static_cast<std::size_t>(k)];
        A[static_cast<std::size_t>(k) + 1] = -(rhs / t2);
    }
    return A;
}

// dA_k/dt_j at t_j = 0 over the pure-t_2 background.
inline std::vector<Rational> tutte_disc_first_order(const Rational& t2, const Rational& a0, int j,
                                                    int kmax) {
    if (t2.is_zero()) throw std::domain_error("tutte_disc: t_2 must be nonzero");
    if (j < 3) throw std::domain_error("tutte_disc_first_order: expects a time above t_2");
    std::vector<Rational> A = tutte_disc({{2, t2}}, a0, kmax + j + 1);
    std::vector<Rational> D(static_cast<std::size_t>(kmax) + 1, Rational(0));
    for (int k = 0; k + 1 <= kmax; ++k) {
        Rational rhs(0);
        for (int l = 0; l <= k - 1; ++l)
            rhs += D[static_cast<std::size_t>(l)] * A[static_cast<std::size_t>(k - l - 1)] +
                   A[static_cast<std::size_t>(l)] * D[static_cast<std::size_t>(k - l - 1)];
        rhs += A[static_cast<std::size_t>(k + j - 1)];
        D[static_cast<std::size_t>(k) + 1] = -(rhs / t2);
    }
    return D;
}

// ---------------------------------------------------------------------------
// One-face maps: all (2k-1)!! pairings of the edges of a 2k-gon, genus read
// off the Euler characteristic V - k + 1 = 2 - 2g of the glued surface.
// ---------------------------------------------------------------------------

namespace detail {
struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(static_cast<std::size_t>(n)) {
        std::iota(p.begin(), p.end(), 0);
    }
    int find(int x) { return p[static_cast<std::size_t>(x)] == x
                                 ? x
                                 : p[static_cast<std::size_t>(x)] = find(p[static_cast<std::size_t>(x)]); }
    void unite(int a, int b) { p[static_cast<std::size_t>(find(a))] = find(b); }
};

inline void enumerate_pairings(std::vector<int>& partner, int n2,
                               const std::function<void(const std::vector<int>&)>& emit) {
    int first = -1;
    for (int e = 0; e < n2; ++e)
        if (partner[static_cast<std::size_t>(e)] < 0) {
            first = e;
            break;
        }
    if (first < 0) {
        emit(partner);
        return;
    }
    for (int f = first + 1; f < n2; ++f) {
        if (partner[static_cast<std::size_t>(f)] >= 0) continue;
        partner[static_cast<std::size_t>(first)] = f;
        partner[static_cast<std::size_t>(f)] = first;
        enumerate_pairings(partner, n2, emit);
        partner[static_cast<std::size_t>(first)] = -1;
        partner[static_cast<std::size_t>(f)] = -1;
    }
}
} // namespace detail

inline std::map<int, long long> one_face_maps(int k) {
    if (k < 1 || k > 6)
        throw std::domain_error("one_face_maps: exhaustive enumeration guarded to 1 <= k <= 6");
    int n2 = 2 * k;
    std::map<int, long long> genus_counts;
    std::vector<int> partner(static_cast<std::size_t>(n2), -1);
    detail::enumerate_pairings(partner, n2, [&](const std::vector<int>& m) {
        // Edge e runs from polygon vertex e to e+1 (mod 2k); gluing e to f
        // orientation-reversing identifies e ~ f+1 and e+1 ~ f.
        detail::UnionFind uf(n2);
        for (int e = 0; e < n2; ++e) {
            int f = m[static_cast<std::size_t>(e)];
            uf.unite(e, (f + 1) % n2);
            uf.unite((e + 1) % n2, f);
        }
        int V = 0;
        for (int v = 0; v < n2; ++v)
            if (uf.find(v) == v) ++V;
        int chi = V - k + 1;
        genus_counts[(2 - chi) / 2] += 1;
    });
    return genus_counts;
}

// ---------------------------------------------------------------------------
// Simple Hurwitz numbers by cut-and-join. F_r(mu) counts ordered r-tuples of
// transpositions multiplying to a fixed permutation of cycle type mu
// (split/merge downward recursion); dividing by the centralizer z_mu gives
// the 1/n!-weighted disconnected count, and the pointed exponential formula
// extracts the connected numbers.
// ---------------------------------------------------------------------------

using Partition = std::vector<long>; // weakly decreasing positive parts

inline Partition make_partition(std::vector<long> parts) {
    for (long p : parts)
        if (p <= 0) throw std::domain_error("partition parts must be positive");
    std::sort(parts.begin(), parts.end(), std::greater<>());
    return parts;
}

inline long partition_size(const Partition& mu) {
    return std::accumulate(mu.begin(), mu.end(), 0L);
}

inline Rational centralizer_order(const Partition& mu) {
    Rational z(1);
    std::size_t i = 0;
    while (i < mu.size()) {
        std::size_t j = i;
        while (j < mu.size() && mu[j] == mu[i]) ++j;
        long m = static_cast<long>(j - i);
        z *= Rational(mu[i]).pow(m) * factorial(m);
        i = j;
    }
    return z;
}

inline Rational automorphism_order(const Partition& mu) {
    Rational a(1);
    std::size_t i = 0;
    while (i < mu.size()) {
        std::size_t j = i;
        while (j < mu.size() && mu[j] == mu[i]) ++j;
        a *= factorial(static_cast<long>(j - i));
        i = j;
    }
    return a;
}

class HurwitzOracle {
public:
    // Ordered transposition factorizations of a fixed type-mu permutation.
    Rational factorizations(long r, const Partition& mu) {
        if (r < 0) return Rational(0);
        if (r == 0) {
            for (long p : mu)
                if (p != 1) return Rational(0);
            return Rational(1);
        }
        auto key = std::make_pair(r, mu);
        auto it = fmemo_.find(key);
        if (it != fmemo_.end()) return it->second;
        Rational total(0);
        // merge two cycles: i * j transpositions per unordered pair of parts
        for (std::size_t a = 0; a < mu.size(); ++a)
            for (std::size_t b = a + 1; b < mu.size(); ++b) {
                Partition nu;
                nu.reserve(mu.size() - 1);
                for (std::size_t t = 0; t < mu.size(); ++t)
                    if (t != a && t != b) nu.push_back(mu[t]);
                nu.push_back(mu[a] + mu[b]);
                std::sort(nu.begin(), nu.end(), std::greater<>());
                total += Rational(mu[a]) * Rational(mu[b]) * factorizations(r - 1, nu);
            }
        // split one cycle of length L into (d, L-d): L transpositions per
        // unordered split, L/2 for the symmetric split
        for (std::size_t a = 0; a < mu.size(); ++a) {
            if (a && mu[a] == mu[a - 1]) continue; // same value, same result; weight below
            long same = 0;
            for (std::size_t t = 0; t < mu.size(); ++t)
                if (mu[t] == mu[a]) ++same;
            long L = mu[a];
            for (long d = 1; 2 * d <= L; ++d) {
                Partition nu;
                nu.reserve(mu.size() + 1);
                bool removed = false;
                for (std::size_t t = 0; t < mu.size(); ++t) {
                    if (!removed && mu[t] == L) {
                        removed = true;
                        continue;
                    }
                    nu.push_back(mu[t]);
                }
                nu.push_back(d);
                nu.push_back(L - d);
                std::sort(nu.begin(), nu.end(), std::greater<>());
                long ways = (2 * d == L) ? L / 2 : L;
                total += Rational(same) * Rational(ways) * factorizations(r - 1, nu);
            }
        }
        fmemo_.emplace(key, total);
        return total;
    }

    // Disconnected count weighted by 1/n! with sheets unlabeled.
    Rational disconnected(long r, const Partition& mu) {
        if (mu.empty()) return Rational(r == 0 ? 1 : 0);
        return factorizations(r, mu) / centralizer_order(mu);
    }

    // Connected count (transitive monodromy), same weighting.
    Rational connected(long r, const Partition& mu) {
        if (mu.empty()) return Rational(0);
        if (r < 0) return Rational(0);
        auto key = std::make_pair(r, mu);
        auto it = cmemo_.find(key);
        if (it != cmemo_.end()) return it->second;
        // Point at one copy of the largest part v: m_v(mu) N_r(mu) =
        // sum over sub-multisets nu containing v and splittings of the
        // transposition labels.
        long v = mu.front();
        long mv_mu = static_cast<long>(std::count(mu.begin(), mu.end(), v));
        Rational acc = Rational(mv_mu) * disconnected(r, mu);
        for_each_submultiset_containing(mu, v, [&](const Partition& nu, const Partition& rest) {
            if (nu == mu) return; // handled by the r' = r term below
            long mv_nu = static_cast<long>(std::count(nu.begin(), nu.end(), v));
            for (long rp = 0; rp <= r; ++rp) {
                Rational c = connected(rp, nu);
                if (c.is_zero()) continue;
                Rational rest_cnt = disconnected(r - rp, rest);
                if (rest_cnt.is_zero()) continue;
                acc -= binomial(r, rp) * Rational(mv_nu) * c * rest_cnt;
            }
        });
        Rational result = acc / Rational(mv_mu);
        cmemo_.emplace(key, result);
        return result;
    }

    // Connected simple Hurwitz number h_{g,mu}: r = 2g - 2 + l(mu) + |mu|
    // simple branch points besides the mu-ramification over infinity.
    Rational simple_hurwitz(long g, const Partition& mu) {
        if (mu.empty()) throw std::domain_error("hurwitz: empty partition");
        long r = 2 * g - 2 + static_cast<long>(mu.size()) + partition_size(mu);
        if (r < 0) return Rational(0);
        return connected(r, mu);
    }

    // The normalization used alongside the displayed genus-0 recursion:
    // H_{g,mu} = |mu| |Aut(mu)| h_{g,mu} / r!; the degree-1 identity cover
    // (r = 0) is the base case outside the normalized recursion.
    Rational normalized(long g, const Partition& mu) {
        long r = 2 * g - 2 + static_cast<long>(mu.size()) + partition_size(mu);
        if (r < 0) return Rational(0);
        if (r == 0) return simple_hurwitz(g, mu);
        return Rational(partition_size(mu)) * automorphism_order(mu) * simple_hurwitz(g, mu) /
               factorial(r);
    }

private:
    template <typename F>
    static void for_each_submultiset_containing(const Partition& mu, long v, F&& emit) {
        // Distinct part values with multiplicities.
        std::vector<std::pair<long, long>> vals;
        for (long p : mu) {
            if (!vals.empty() && vals.back().first == p) {
                ++vals.back().second;
            } else {
                vals.emplace_back(p, 1);
            }
        }
        std::vector<long> take(vals.size(), 0);
        std::function<void(std::size_t)> rec = [&](std::size_t idx) {
            if (idx == vals.size()) {
                Partition nu, rest;
                for (std::size_t i = 0; i < vals.size(); ++i) {
                    for (long t = 0; t < take[i]; ++t) nu.push_back(vals[i].first);
                    for (long t = take[i]; t < vals[i].second; ++t) rest.push_back(vals[i].first);
                }
                if (!nu.empty()) emit(nu, rest);
                return;
            }
            long lo = (vals[idx].first == v) ? 1 : 0;
            for (long t = lo; t <= vals[idx].second; ++t) {
                take[idx] = t;
                rec(idx + 1);
            }
        };
        rec(0);
    }

    std::map<std::pair<long, Partition>, Rational> fmemo_;
    std::map<std::pair<long, Partition>, Rational> cmemo_;
};

// The displayed genus-0 one-part recursion:
//   (n-1)/n H_{0,n} = 1/2 sum_{k=1}^{n-1} H_{0,k} H_{0,n-k},  H_{0,1} = 1.
inline std::vector<Rational> hurwitz_tree_recursion(int nmax) {
    std::vector<Rational> H(static_cast<std::size_t>(nmax) + 1, Rational(0));
    H[1] = Rational(1);
    for (int n = 2; n <= nmax; ++n) {
        Rational s(0);
        for (int k = 1; k <= n - 1; ++k)
            s += H[static_cast<std::size_t>(k)] * H[static_cast<std::size_t>(n - k)];
        H[static_cast<std::size_t>(n)] = s * Rational(n, 2) / Rational(n - 1);
    }
    return H;
}

// ---------------------------------------------------------------------------
// Intersection-number table closed under the string and dilaton equations.
// Seeds <tau_0^3> and <tau_1> are imported (from the engine's Airy outputs),
// never hardcoded here.
// ---------------------------------------------------------------------------

struct TauUnreachable : std::runtime_error {
    explicit TauUnreachable(const std::string& m) : std::runtime_error(m) {}
};

class TauTable {
public:
    TauTable(Rational seed_tau0_cubed, Rational seed_tau1)
        : s03_(std::move(seed_tau0_cubed)), s11_(std::move(seed_tau1)) {}

    // <tau_{d_1} ... tau_{d_n}>_g; zero off the dimension shell.
    Rational value(long g, std::vector<long> d) {
        std::sort(d.begin(), d.end());
        long n = static_cast<long>(d.size());
        long total = std::accumulate(d.begin(), d.end(), 0L);
        if (total != 3 * g - 3 + n) return Rational(0);
        if (g == 0 && n == 3) return s03_; // <tau_0^3>
        if (g == 1 && n == 1) return s11_; // <tau_1>
        auto key = std::make_pair(g, d);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Rational result;
        if (!d.empty() && d.front() == 0) {
            // string equation: <tau_0 prod tau_{d_i}> = sum_j <... tau_{d_j - 1} ...>
            std::vector<long> rest(d.begin() + 1, d.end());
            Rational acc(0);
            for (std::size_t j = 0; j < rest.size(); ++j) {
                if (rest[j] == 0) continue;
                if (j && rest[j] == rest[j - 1]) continue;
                std::vector<long> dec = rest;
                dec[j] -= 1;
                long count = static_cast<long>(std::count(rest.begin(), rest.end(), rest[j]));
                acc += Rational(count) * value(g, dec);
            }
            result = acc;
        } else if (!d.empty() && d.front() == 1) {
            // dilaton equation: <tau_1 X> = (2g - 2 + n - 1) <X>
            std::vector<long> rest(d.begin() + 1, d.end());
            result = Rational(2 * g - 2 + n - 1) * value(g, rest);
        } else {
            throw TauUnreachable("bracket outside the string/dilaton closure of the seeds");
        }
        memo_.emplace(key, result);
        return result;
    }

private:
    Rational s03_, s11_;
    std::map<std::pair<long, std::vector<long>>, Rational> memo_;
};

// ---------------------------------------------------------------------------
// omega_2^(1) by the direct two-fold residue formula
//   2 sum_{i,j} Res_{z->a_i} Res_{z'->a_j} K(z1,z) K(z,z')
//                [B(z',z2) B(zbar,zbar') + B(zbar,z2) B(z',zbar')],
// computed with nested series (innermost residue first), independently of
// the engine's memoized path.
// ---------------------------------------------------------------------------

inline Rational residue_product(const QSeries& a, const QSeries& b) {
    long long ord =
        std::min(sat_add(a.order(), b.valuation()), sat_add(b.order(), a.valuation()));
    if (ord <= -1) throw OrderUnderflow("oracle residue not certified", -ord + 2);
    Rational r(0);
    for (long long e = a.valuation(); e < a.coeff_end(); ++e) {
        Rational be = b.at(-1 - e);
        if (!be.is_zero()) r += a.at(e) * be;
    }
    return r;
}

inline CorrelatorTensor omega21_direct(Engine& eng) {
    using Inner = QSeries;  // series in the outer variable s
    using Big = QQSeries;   // series in the inner variable s' over Inner

    for (int attempt = 0;; ++attempt) {
        try {
            eng.ensure_order(Engine::default_order(1, 2) + 4);
            const long long W = eng.current_order();
            const auto& bps = eng.curve().branch_points();
            const int nbp = static_cast<int>(bps.size());
            const int Mmax = 6 * 1 - 4 + 2 * 2; // pole bound for (g,n) = (1,2)

            auto embed = [](const QSeries& f) { // series in s' as Big
                if (f.is_degenerate()) return Big::zero_below(f.order());
                std::vector<Inner> cs;
                for (long long e = f.valuation(); e < f.coeff_end(); ++e)
                    cs.push_back(Inner::monomial(f.at(e), 0));
                return Big(f.valuation(), std::move(cs), f.order());
            };
            auto big_const = [](const Inner& v) { return Big::monomial(v, 0); };

            std::map<std::pair<BasisForm, BasisForm>, Rational> raw; // ordered (z1, z2)
            auto raw_add = [&raw](const BasisForm& a, const BasisForm& b, const Rational& v) {
                if (v.is_zero()) return;
                auto key = std::make_pair(a, b);
                auto it = raw.find(key);
                if (it == raw.end()) {
                    raw.emplace(key, v);
                } else {
                    it->second += v;
                    if (it->second.is_zero()) raw.erase(it);
                }
            };

            for (int i = 0; i < nbp; ++i) {
                const BranchFrame& fi = eng.frame(i);
                Inner Pi = (fi.dY * fi.rho_loc).mul_long(2).inverse();
                Inner sigma_i = fi.sigma;
                Inner sigma_i_prime = sigma_i.derivative();
                Inner s_id = Inner::monomial(Rational(1), 1);
                std::vector<Inner> kappa(static_cast<std::size_t>(Mmax), Inner());
                for (int m = 1; m < Mmax; ++m)
                    kappa[static_cast<std::size_t>(m)] =
                        Pi * (sigma_i.pow(m) - Inner::monomial(Rational(1), m));

                for (int j = 0; j < nbp; ++j) {
                    const BranchFrame& fj = eng.frame(j);
                    QSeries Pj = (fj.dY * fj.rho_loc).mul_long(2).inverse();
                    QSeries sigma_j = fj.sigma;
                    QSeries sigma_j_prime = sigma_j.derivative();
                    Rational cij = bps[static_cast<std::size_t>(i)] -
                                   bps[static_cast<std::size_t>(j)];

                    // K(z, z') = [1/(c+s-sigma_j(s')) - 1/(c+s-s')] P_j(s')
                    Inner c_plus_s =
                        (Inner::monomial(cij, 0) + s_id).truncated(W);
                    Big den1 = (big_const(c_plus_s) - embed(sigma_j)).truncated(W);
                    Big den2 = (big_const(c_plus_s) -
                                Big::monomial(Inner::monomial(Rational(1), 0), 1))
                                   .truncated(W);
                    Big Kzz = (den1.inverse() - den2.inverse()) * embed(Pj);

                    // bracket term 1: B(zbar, zbar') with the z2 factor B(z', z2)
                    Big dbar = (big_const((Inner::monomial(cij, 0) + sigma_i).truncated(W)) -
                                embed(sigma_j))
                                   .truncated(W);
                    Big term1 = Kzz * dbar.inverse().pow(2) * big_const(sigma_i_prime) *
                                embed(sigma_j_prime);

                    // bracket term 2: B(z', zbar') with the z2 factor B(zbar, z2)
                    QSeries sp_minus_sig =
                        (QSeries::monomial(Rational(1), 1) - sigma_j).truncated(W);
                    Big term2 = Kzz * embed(sigma_j_prime * sp_minus_sig.inverse().pow(2));

                    for (int m2 = 0; m2 + 2 <= Mmax; ++m2) {
                        // term 1: coefficient of s'^{-1-m2} feeds (j, m2+2)
                        Inner R1 = term1.coeff(-1 - m2).mul_long(m2 + 1);
                        // term 2: inner residue, then sigma_i powers feed (i, m2+2)
                        Inner R2 = (term2.coeff(-1) * sigma_i_prime * sigma_i.pow(m2))
                                       .mul_long(m2 + 1);
                        for (int m0 = 1; m0 < Mmax; ++m0) {
                            const Inner& ka = kappa[static_cast<std::size_t>(m0)];
                            Rational r1 = residue_product(ka, R1);
                            raw_add(BasisForm{i, m0 + 1}, BasisForm{j, m2 + 2},
                                    Rational(2) * r1);
                            Rational r2 = residue_product(ka, R2);
                            raw_add(BasisForm{i, m0 + 1}, BasisForm{i, m2 + 2},
                                    Rational(2) * r2);
                        }
                    }
                }
            }
            // z1 <-> z2 symmetry is a consequence, asserted here; the stored
            // canonical entry is the ordered coefficient.
            CorrelatorTensor out(1, 2, eng.tensor_bps());
            for (const auto& [key, v] : raw) {
                auto swapped = raw.find({key.second, key.first});
                if (swapped == raw.end() || swapped->second != v)
                    throw std::logic_error("omega21_direct: output not symmetric in z1, z2");
                if (!(key.second < key.first)) out.add({key.first, key.second}, v);
            }
            return out;
        } catch (const OrderUnderflow&) {
            if (attempt >= 6) throw;
            eng.ensure_order(2 * eng.current_order());
        }
    }
}

} // namespace trec::oracles
