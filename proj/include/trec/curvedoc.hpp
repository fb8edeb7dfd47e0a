#pragma once

// Curve document format: structured JSON with integer or "p/q" coefficient
// lists, lowest degree first.
//
//   {
//     "label": "gaussian",
//     "y":  {"num": [1], "den": [0, 1]},
//     "dx": {"num": [-1, 0, 1], "den": [0, 0, 1]},
//     "x":  {"num": [1, 0, 1], "den": [0, 1]},          // optional
//     "expansion_points": [                              // optional
//       {"name": "infinity", "location": "infinity",
//        "weight": {"R": {"num": [1, 0, 1], "den": [0, 1]}}}
//     ],
//     "settings": {"order": 24}                          // optional
//   }
//
// A weight is f = R * exp(Q) with R, Q rational; Q defaults to zero.

#include "trec/curve.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace trec {

struct WeightSpec {
    std::string name;
    std::optional<Rational> location; // nullopt means the infinity chart
    RationalFunction R;
    RationalFunction Q; // zero when absent
};

struct CurveDocument {
    SpectralCurve curve;
    std::vector<WeightSpec> weights;
    std::optional<long long> default_order;
};

namespace doc {

inline Rational parse_coeff(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rational(static_cast<long long>(j.get<long long>()));
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw CurveError("curve document: coefficient must be an integer or a \"p/q\" string");
}

inline Polynomial parse_poly(const nlohmann::json& j) {
    if (!j.is_array()) throw CurveError("curve document: coefficient list expected");
    std::vector<Rational> c;
    c.reserve(j.size());
    for (const auto& e : j) c.push_back(parse_coeff(e));
    return Polynomial(std::move(c));
}

inline RationalFunction parse_ratfunc(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("num"))
        throw CurveError("curve document: rational function needs {num: [...], den: [...]}");
    Polynomial num = parse_poly(j.at("num"));
    Polynomial den = j.contains("den") ? parse_poly(j.at("den")) : Polynomial::one();
    if (den.is_zero()) throw CurveError("curve document: zero denominator polynomial");
    return RationalFunction(std::move(num), std::move(den));
}

inline nlohmann::json ratfunc_json(const RationalFunction& f) {
    auto coeffs = [](const Polynomial& p) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& c : p.coeffs()) a.push_back(c.str());
        return a;
    };
    return {{"num", coeffs(f.num())}, {"den", coeffs(f.den())}};
}

} // namespace doc

inline CurveDocument parse_curve_document(const nlohmann::json& j) {
    if (!j.is_object()) throw CurveError("curve document: object expected");
    for (const char* field : {"label", "y", "dx"})
        if (!j.contains(field))
            throw CurveError(std::string("curve document: missing field '") + field + "'");
    std::string label = j.at("label").get<std::string>();
    RationalFunction y = doc::parse_ratfunc(j.at("y"));
    RationalFunction rho = doc::parse_ratfunc(j.at("dx"));
    std::optional<RationalFunction> x;
    if (j.contains("x")) x = doc::parse_ratfunc(j.at("x"));

    CurveDocument out{SpectralCurve(label, std::move(y), std::move(rho), std::move(x)), {}, {}};

    if (j.contains("expansion_points")) {
        for (const auto& e : j.at("expansion_points")) {
            WeightSpec w;
            w.name = e.at("name").get<std::string>();
            const auto& loc = e.at("location");
            if (loc.is_string() && loc.get<std::string>() == "infinity") {
                w.location = std::nullopt;
            } else {
                w.location = doc::parse_coeff(loc);
            }
            const auto& wt = e.at("weight");
            w.R = doc::parse_ratfunc(wt.at("R"));
            w.Q = wt.contains("Q") ? doc::parse_ratfunc(wt.at("Q")) : RationalFunction::zero();
            out.weights.push_back(std::move(w));
        }
    }
    if (j.contains("settings") && j.at("settings").contains("order"))
        out.default_order = j.at("settings").at("order").get<long long>();
    return out;
}

inline CurveDocument load_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CurveError("cannot open curve file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw CurveError("curve file '" + path + "': " + e.what());
    }
    return parse_curve_document(j);
}

} // namespace trec
