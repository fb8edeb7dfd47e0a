// trec: exact topological recursion on genus-0 spectral curves.
//
// Verbs: branchpoints, omega, fg, expand, verify. All numeric output is
// exact "p/q"; runs on identical inputs are byte-identical. Exit codes:
// 0 ok, 1 verification failure, 2 curve validation, 3 unstable or
// out-of-scope request, 4 order underflow after retries, 5 bad weight.

#include "trec/cache.hpp"
#include "trec/curvedoc.hpp"
#include "trec/io.hpp"
#include "trec/verify.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace trec;

struct GlobalArgs {
    std::string curve_file;
    std::string cache_dir;
    std::string curves_dir = "curves";
    std::string format = "table";
    long long order = 0;
    bool parallel = false;
};

CurveDocument load_doc(const GlobalArgs& g) {
    if (g.curve_file.empty()) throw CurveError("no curve file given (use --curve FILE)");
    return load_curve_file(g.curve_file);
}

Engine make_engine(const GlobalArgs& g, const SpectralCurve& c) {
    return Engine(c, EngineOptions{g.parallel, g.order});
}

void emit(const GlobalArgs& g, const ordered_json& j, const std::string& table) {
    if (g.format == "json") {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << table;
    }
}

std::optional<ResultCache> open_cache(const GlobalArgs& g) {
    if (g.cache_dir.empty()) return std::nullopt;
    return ResultCache(g.cache_dir);
}

int cmd_branchpoints(const GlobalArgs& g) {
    CurveDocument doc = load_doc(g);
    ordered_json j = ordered_json::array();
    std::string table;
    for (const auto& a : doc.curve.branch_points()) {
        j.push_back(ordered_json{{"location", a.str()}, {"status", "simple, regular"}});
        table += "a = " + a.str() + " (simple, regular)\n";
    }
    emit(g, j, table);
    return 0;
}

int cmd_omega(const GlobalArgs& g, long gg, long nn) {
    CurveDocument doc = load_doc(g);
    if (!is_stable(gg, nn))
        throw UnstableRequest("omega(" + std::to_string(gg) + "," + std::to_string(nn) +
                              ") is unstable; omega_1^(0) = -y dx and omega_2^(0) is the "
                              "Bergman kernel dz1 dz2/(z1-z2)^2");
    long long nominal = std::max(g.order, Engine::default_order(gg, nn));
    std::string key = ResultCache::make_key(
        doc.curve.content_key(), "omega g=" + std::to_string(gg) + " n=" + std::to_string(nn),
        nominal);
    auto cache = open_cache(g);
    if (cache) {
        if (auto hit = cache->get(key)) {
            CorrelatorTensor t = tensor_from_json(*hit, doc.curve.branch_points());
            emit(g, *hit, tensor_table(t));
            return 0;
        }
    }
    Engine eng = make_engine(g, doc.curve);
    const CorrelatorTensor& t = eng.omega(gg, nn);
    ordered_json payload = tensor_to_json(t);
    if (cache) cache->put(key, payload);
    emit(g, payload, tensor_table(t));
    return 0;
}

int cmd_fg(const GlobalArgs& g, long gg) {
    CurveDocument doc = load_doc(g);
    if (gg < 2)
        throw UnstableRequest("F_" + std::to_string(gg) +
                              " is out of scope (only g >= 2 is defined here)");
    long long nominal = std::max(g.order, Engine::default_order(gg, 1));
    std::string key =
        ResultCache::make_key(doc.curve.content_key(), "fg g=" + std::to_string(gg), nominal);
    auto cache = open_cache(g);
    if (cache) {
        if (auto hit = cache->get(key)) {
            emit(g, *hit, hit->at("value").get<std::string>() + "\n");
            return 0;
        }
    }
    Engine eng = make_engine(g, doc.curve);
    Rational v = eng.fg(gg);
    ordered_json payload{{"g", gg}, {"value", v.str()}};
    if (cache) cache->put(key, payload);
    emit(g, payload, v.str() + "\n");
    return 0;
}

std::pair<long long, long long> parse_window(const std::string& w) {
    auto pos = w.find("..");
    if (pos == std::string::npos)
        throw BadWeight("window must look like A..B (got '" + w + "')");
    return {std::stoll(w.substr(0, pos)), std::stoll(w.substr(pos + 2))};
}

int cmd_expand(const GlobalArgs& g, const std::string& target, long gg, long nn,
               const std::string& weight_name, const std::string& window) {
    CurveDocument doc = load_doc(g);
    const WeightSpec* spec = nullptr;
    for (const auto& w : doc.weights)
        if (w.name == weight_name) spec = &w;
    if (!spec) {
        std::string names;
        for (const auto& w : doc.weights) names += " '" + w.name + "'";
        throw BadWeight("no expansion point named '" + weight_name + "' in the curve file;" +
                        (names.empty() ? " none defined" : " available:" + names));
    }
    WeightFunction wf{spec->location, spec->R, spec->Q};
    auto [kmin, kmax] = parse_window(window);

    std::string descr = "expand target=" + target + " g=" + std::to_string(gg) +
                        " n=" + std::to_string(nn) + " weight=" + weight_name + " window=" +
                        std::to_string(kmin) + ".." + std::to_string(kmax);
    long long nominal =
        std::max(g.order, Engine::default_order(std::max(gg, 0L), std::max(nn, 1L)));
    std::string key = ResultCache::make_key(doc.curve.content_key(), descr, nominal);
    auto cache = open_cache(g);
    if (cache) {
        if (auto hit = cache->get(key)) {
            emit(g, *hit, report_table(report_from_json(*hit)));
            return 0;
        }
    }
    Engine eng = make_engine(g, doc.curve);
    ExpansionReport rep;
    if (target == "disc") {
        rep = expand_disc(eng, wf, kmin, kmax);
    } else if (target == "omega") {
        if (!is_stable(gg, nn))
            throw UnstableRequest("expand --target omega needs a stable (g,n); the disc is "
                                  "served by --target disc");
        rep = expand_at_point(eng, eng.omega(gg, nn), wf, kmin, kmax);
    } else {
        throw BadWeight("unknown expand target '" + target + "' (use omega or disc)");
    }
    ordered_json payload = report_to_json(rep);
    if (cache) cache->put(key, payload);
    emit(g, payload, report_table(rep));
    return 0;
}

int cmd_verify(const GlobalArgs& g, const std::string& suite, long max_chi) {
    std::vector<std::string> files;
    if (suite == "all") {
        for (const char* n : {"airy", "gaussian", "lambert"})
            files.push_back(g.curves_dir + "/" + std::string(n) + ".json");
    } else if (!suite.empty()) {
        files.push_back(g.curves_dir + "/" + suite + ".json");
    } else if (!g.curve_file.empty()) {
        files.push_back(g.curve_file);
    } else {
        throw CurveError("verify: give a suite name (airy, gaussian, lambert, all) or --curve");
    }
    bool all_pass = true;
    ordered_json jout = ordered_json::array();
    for (const auto& f : files) {
        CurveDocument doc = load_curve_file(f);
        std::cout << "== verify " << doc.curve.label() << " ==\n";
        for (const CheckResult& r : verify_curve(doc, max_chi)) {
            all_pass = all_pass && r.pass;
            std::cout << (r.pass ? "PASS " : "FAIL ") << r.name
                      << (r.detail.empty() ? "" : ": " + r.detail) << "\n";
            jout.push_back(
                ordered_json{{"curve", doc.curve.label()}, {"check", r.name}, {"pass", r.pass}});
        }
    }
    if (g.format == "json") std::cout << jout.dump(2) << "\n";
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Eynard-Orantin correlators and symplectic invariants of genus-0 "
                 "spectral curves"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--curve", g.curve_file, "curve document (JSON)");
    app.add_option("--order", g.order, "frame order floor (default: automatic per (g,n))");
    app.add_option("--cache", g.cache_dir, "on-disk exact-result cache directory");
    app.add_option("--format", g.format, "output format: table or json")
        ->check(CLI::IsMember({"table", "json"}));
    app.add_option("--curves-dir", g.curves_dir, "directory with the shipped curve documents");
    app.add_flag("--parallel", g.parallel, "compute branch-point residues concurrently");

    auto* bp = app.add_subcommand("branchpoints", "list validated branch points");

    long gg = 0, nn = 0;
    auto* om = app.add_subcommand("omega", "stable correlator as an exact pole-basis tensor");
    om->add_option("--g", gg, "genus")->required();
    om->add_option("--n", nn, "number of slots")->required();

    long fgg = 0;
    auto* fgc = app.add_subcommand("fg", "symplectic invariant F_g, g >= 2");
    fgc->add_option("--g", fgg, "genus")->required();

    std::string target = "omega", weight_name, window = "0..8";
    long eg = 0, en = 1;
    auto* ex = app.add_subcommand("expand", "re-expansion coefficients in a weight function");
    ex->add_option("--target", target, "omega or disc");
    ex->add_option("--g", eg, "genus (omega target)");
    ex->add_option("--n", en, "slots (omega target)");
    ex->add_option("--weight", weight_name, "expansion point name from the curve file")
        ->required();
    ex->add_option("--window", window, "index window A..B (negative indices allowed)");

    std::string suite;
    long max_chi = 4;
    auto* ver = app.add_subcommand("verify", "run the verification checks");
    ver->add_option("suite", suite, "airy, gaussian, lambert, or all");
    ver->add_option("--max-chi", max_chi, "largest 2g-2+n to cover (default 4)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bp->parsed()) return cmd_branchpoints(g);
        if (om->parsed()) return cmd_omega(g, gg, nn);
        if (fgc->parsed()) return cmd_fg(g, fgg);
        if (ex->parsed()) return cmd_expand(g, target, eg, en, weight_name, window);
        if (ver->parsed()) return cmd_verify(g, suite, max_chi);
    } catch (const trec::BadWeight& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const trec::OrderUnderflow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const trec::UnstableRequest& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const trec::NotASquare& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const trec::CurveError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
