#pragma once

// Named verification checks driven by `trec verify` and the acceptance
// suite. Every check is an exact equality; failures carry the first
// differing coefficient as a certificate.

#include "trec/curvedoc.hpp"
#include "trec/io.hpp"
#include "trec/oracles.hpp"
#include "trec/transforms.hpp"

#include <functional>
#include <string>
#include <vector>

namespace trec {

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

namespace verify_detail {

inline std::vector<std::pair<long, long>> stable_range(long max_chi) {
    std::vector<std::pair<long, long>> out;
    for (long g = 0; g <= (max_chi + 2) / 2; ++g)
        for (long n = 1; n <= max_chi + 2 - 2 * g; ++n)
            if (is_stable(g, n) && 2 * g - 2 + n <= max_chi) out.emplace_back(g, n);
    return out;
}

inline Rational fg_with_phi_shift(Engine& eng, long g, const Rational& c) {
    const CorrelatorTensor& w = eng.omega(g, 1);
    Rational acc(0);
    for (const auto& [key, coeff] : w.entries()) {
        const BasisForm& b = key[0];
        Rational phi_c = eng.phi_coefficient(b.bp, b.m - 1);
        if (b.m == 1) phi_c += c; // [s^0] of the shifted potential
        acc += coeff * phi_c;
    }
    return acc / Rational(2 - 2 * g);
}

} // namespace verify_detail

inline std::vector<CheckResult> verify_curve(const CurveDocument& doc, long max_chi = 4) {
    std::vector<CheckResult> out;
    const SpectralCurve& curve = doc.curve;
    Engine eng(curve);
    auto range = verify_detail::stable_range(max_chi);

    auto run = [&out](const std::string& name, const std::function<std::string()>& body) {
        try {
            std::string detail = body();
            out.push_back({name, true, detail});
        } catch (const std::exception& e) {
            out.push_back({name, false, e.what()});
        }
    };

    run("symmetry and pole bounds", [&] {
        // The engine verifies slot-permutation symmetry while computing (full
        // for n <= 3, randomized transpositions beyond) and rejects any pole
        // order outside [2, 6g-4+2n]; recomputation here also checks m >= 2.
        for (auto [g, n] : range) {
            const CorrelatorTensor& t = eng.omega(g, n);
            if (!t.entries().empty() && t.min_pole_order() < 2)
                throw std::logic_error("pole order below 2 in omega(" + std::to_string(g) + "," +
                                       std::to_string(n) + ")");
            if (t.max_pole_order() > 6 * g - 4 + 2 * n)
                throw std::logic_error("pole bound violated");
        }
        return "all stable (g,n) with 2g-2+n <= " + std::to_string(max_chi);
    });

    run("rescaling y -> lambda y", [&] {
        for (long lam : {2, 3}) {
            Engine scaled(curve.rescaled(Rational(lam)));
            for (auto [g, n] : range) {
                CorrelatorTensor expect = eng.omega(g, n).scaled(Rational(lam).pow(2 - 2 * g - n));
                if (!(scaled.omega(g, n) == expect))
                    throw std::logic_error("omega(" + std::to_string(g) + "," + std::to_string(n) +
                                           ") lambda=" + std::to_string(lam) + ": " +
                                           scaled.omega(g, n).first_difference(expect));
            }
            for (long g : {2L, 3L}) {
                Rational expect = eng.fg(g) * Rational(lam).pow(2 - 2 * g);
                if (scaled.fg(g) != expect)
                    throw std::logic_error("F_" + std::to_string(g) + " mismatch: " +
                                           scaled.fg(g).str() + " vs " + expect.str());
            }
        }
        return std::string("lambda in {2,3}, tensors and F_2, F_3");
    });

    run("shift invariance y -> y + c", [&] {
        Engine shifted(curve.shifted_y(Rational(7, 3)));
        for (auto [g, n] : range)
            if (!(shifted.omega(g, n) == eng.omega(g, n)))
                throw std::logic_error("tensor changed under constant shift: " +
                                       shifted.omega(g, n).first_difference(eng.omega(g, n)));
        if (shifted.fg(2) != eng.fg(2))
            throw std::logic_error("F_2 changed under constant shift");
        return std::string("c = 7/3, all tensors and F_2");
    });

    if (curve.x()) {
        run("shift invariance y -> y + x", [&] {
            Engine shifted(curve.shifted_y_by_x());
            for (auto [g, n] : range)
                if (!(shifted.omega(g, n) == eng.omega(g, n)))
                    throw std::logic_error("tensor changed under y + x: " +
                                           shifted.omega(g, n).first_difference(eng.omega(g, n)));
            if (shifted.fg(2) != eng.fg(2))
                throw std::logic_error("F_2 changed under y + x shift");
            return std::string("all tensors and F_2");
        });
    }

    run("dilaton identity", [&] {
        std::string done;
        for (auto [g, n] : std::vector<std::pair<long, long>>{{0, 3}, {1, 1}, {2, 1}}) {
            if (2 * g - 2 + n + 1 > max_chi) continue;
            Engine::DilatonCheck d = eng.dilaton(g, n);
            if (!d.holds)
                throw std::logic_error("(2g+n-2) omega(" + std::to_string(g) + "," +
                                       std::to_string(n) + ") != Res omega(g,n+1) Phi: " +
                                       d.lhs.first_difference(d.rhs));
            done += "(" + std::to_string(g) + "," + std::to_string(n) + ") ";
        }
        return done;
    });

    run("omega_2^(1): direct double residue equals recursion", [&] {
        CorrelatorTensor direct = oracles::omega21_direct(eng);
        if (!(direct == eng.omega(1, 2)))
            throw std::logic_error(direct.first_difference(eng.omega(1, 2)));
        return std::string("exact tensor match");
    });

    run("Phi constant independence of F_g", [&] {
        for (long g : {2L, 3L}) {
            Rational shifted = verify_detail::fg_with_phi_shift(eng, g, Rational(17, 5));
            if (shifted != eng.fg(g))
                throw std::logic_error("F_" + std::to_string(g) + " moved under Phi + c");
        }
        return std::string("F_2, F_3 with Phi + 17/5");
    });

    run("truncation robustness at order + 10", [&] {
        Engine fat(curve, EngineOptions{false, eng.current_order() + 10});
        for (auto [g, n] : range)
            if (!(fat.omega(g, n) == eng.omega(g, n)))
                throw std::logic_error("tensor changed at higher order: " +
                                       fat.omega(g, n).first_difference(eng.omega(g, n)));
        return "order " + std::to_string(eng.current_order() + 10);
    });

    run("parallel and serial runs are identical", [&] {
        Engine par(curve, EngineOptions{true, 0});
        for (auto [g, n] : range)
            if (!(par.omega(g, n) == eng.omega(g, n)))
                throw std::logic_error("parallel result differs");
        if (tensor_to_json(par.omega(2, 1)).dump() != tensor_to_json(eng.omega(2, 1)).dump())
            throw std::logic_error("serialized bytes differ");
        return std::string("bit-identical tensors");
    });

    run("memoization purity", [&] {
        Engine cold(curve);
        CorrelatorTensor direct21 = cold.omega(2, 1);
        Engine warm(curve);
        warm.omega(1, 2);
        if (!(warm.omega(2, 1) == direct21))
            throw std::logic_error("(2,1) differs when (1,2) is precomputed");
        return std::string("omega(2,1) cold == after omega(1,2)");
    });

    // Curve-specific oracle comparisons.
    if (curve.label() == "airy") {
        run("intersection numbers vs string/dilaton oracle", [&] {
            ExpansionReport i03 = intersection_numbers(eng, 0, 3);
            ExpansionReport i11 = intersection_numbers(eng, 1, 1);
            oracles::TauTable tau(i03.at({0, 0, 0}), i11.at({1}));
            for (auto [g, n] : std::vector<std::pair<long, long>>{
                     {0, 3}, {0, 4}, {0, 5}, {1, 1}, {1, 2}, {1, 3}}) {
                ExpansionReport rep = intersection_numbers(eng, g, n);
                for (const auto& [d, v] : rep.values) {
                    std::vector<long> dl(d.begin(), d.end());
                    if (tau.value(g, dl) != v)
                        throw std::logic_error("bracket mismatch at g=" + std::to_string(g));
                }
            }
            return std::string("all brackets with 2g-2+n <= 3 match the closure");
        });
    }
    if (curve.label() == "gaussian") {
        run("disc moments vs Tutte recursion", [&] {
            WeightFunction wx = WeightFunction::rational(std::nullopt, *curve.x());
            ExpansionReport disc = expand_disc(eng, wx, 0, 12);
            auto tutte = oracles::tutte_disc({{2, Rational(-1)}}, Rational(1), 12);
            for (long long k = 0; k <= 12; ++k)
                if (disc.at(k) != tutte[static_cast<std::size_t>(k)])
                    throw std::logic_error("moment k=" + std::to_string(k) + ": " +
                                           disc.at(k).str() + " vs " +
                                           tutte[static_cast<std::size_t>(k)].str());
            return std::string("Catalan pattern to k = 12");
        });
        run("genus-1 moments vs one-face gluings", [&] {
            WeightFunction wx = WeightFunction::rational(std::nullopt, *curve.x());
            ExpansionReport rep = expand_at_point(eng, eng.omega(1, 1), wx, 0, 12);
            for (int k = 1; k <= 6; ++k) {
                auto counts = oracles::one_face_maps(k);
                Rational eps1(counts.count(1) ? counts.at(1) : 0);
                if (rep.at(2 * k) != eps1)
                    throw std::logic_error("epsilon_1(" + std::to_string(k) + "): " +
                                           rep.at(2 * k).str() + " vs " + eps1.str());
            }
            return std::string("epsilon_1(k) for k <= 6, exhaustive gluings");
        });
    }
    if (curve.label() == "lambert") {
        run("disc moments vs Hurwitz oracles", [&] {
            if (doc.weights.empty()) throw std::logic_error("lambert document lost its weight");
            const WeightSpec& w = doc.weights.front();
            ExpansionReport disc = expand_disc(eng, {w.location, w.R, w.Q}, -8, -1);
            auto tree = oracles::hurwitz_tree_recursion(8);
            oracles::HurwitzOracle cj;
            for (long n = 1; n <= 8; ++n) {
                Rational closed = Rational(n).pow(n - 1) / factorial(n);
                Rational got = disc.at(-n);
                if (got != closed)
                    throw std::logic_error("H_{0," + std::to_string(n) + "} = " + got.str() +
                                           " vs closed form " + closed.str());
                if (got != tree[static_cast<std::size_t>(n)])
                    throw std::logic_error("tree recursion mismatch at n=" + std::to_string(n));
                if (got != cj.normalized(0, oracles::make_partition({n})))
                    throw std::logic_error("cut-and-join mismatch at n=" + std::to_string(n));
            }
            return std::string("closed form, displayed recursion, cut-and-join; n <= 8");
        });
    }

    return out;
}

} // namespace trec
