#pragma once

// Canonical serialization of tensors and expansion reports. All numbers are
// exact "p/q" strings; entry orderings are the deterministic map orders, so
// two runs on the same inputs produce byte-identical output.

#include "trec/tensor.hpp"
#include "trec/transforms.hpp"

#include <json.hpp>

#include <string>

namespace trec {

using ordered_json = nlohmann::ordered_json;

inline ordered_json tensor_to_json(const CorrelatorTensor& t) {
    ordered_json j;
    j["g"] = t.g();
    j["n"] = t.n();
    ordered_json entries = ordered_json::array();
    for (const auto& [key, v] : t.entries()) {
        ordered_json e;
        ordered_json poles = ordered_json::array();
        for (const auto& b : key) {
            poles.push_back(ordered_json::array(
                {t.branch_points()[static_cast<std::size_t>(b.bp)].str(), b.m}));
        }
        e["poles"] = std::move(poles);
        e["coeff"] = v.str();
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline CorrelatorTensor tensor_from_json(const ordered_json& j,
                                         const std::vector<Rational>& bps) {
    CorrelatorTensor t(j.at("g").get<long>(), j.at("n").get<long>(), bps);
    for (const auto& e : j.at("entries")) {
        std::vector<BasisForm> key;
        for (const auto& p : e.at("poles")) {
            Rational a = Rational::parse(p.at(0).get<std::string>());
            int bp = -1;
            for (std::size_t i = 0; i < bps.size(); ++i)
                if (bps[i] == a) bp = static_cast<int>(i);
            if (bp < 0) throw CurveError("tensor entry references unknown branch point " + a.str());
            key.push_back(BasisForm{bp, p.at(1).get<int>()});
        }
        t.add(std::move(key), Rational::parse(e.at("coeff").get<std::string>()));
    }
    return t;
}

inline std::string tensor_table(const CorrelatorTensor& t) {
    std::string out;
    for (const auto& [key, v] : t.entries()) {
        out += "poles [";
        for (std::size_t i = 0; i < key.size(); ++i) {
            if (i) out += ", ";
            out += "(" + t.branch_points()[static_cast<std::size_t>(key[i].bp)].str() + "," +
                   std::to_string(key[i].m) + ")";
        }
        out += "], coeff \"" + v.str() + "\"\n";
    }
    if (t.entries().empty()) out = "zero tensor\n";
    return out;
}

inline ordered_json report_to_json(const ExpansionReport& r) {
    ordered_json j;
    j["kind"] = r.kind;
    ordered_json values = ordered_json::array();
    for (const auto& [k, v] : r.values) {
        ordered_json e;
        e["k"] = k;
        e["value"] = v.str();
        values.push_back(std::move(e));
    }
    j["values"] = std::move(values);
    ordered_json notes = ordered_json::array();
    for (const auto& [a, b] : r.notes) notes.push_back(ordered_json::array({a, b}));
    j["notes"] = std::move(notes);
    return j;
}

inline ExpansionReport report_from_json(const ordered_json& j) {
    ExpansionReport r;
    r.kind = j.at("kind").get<std::string>();
    for (const auto& e : j.at("values"))
        r.values.emplace(e.at("k").get<std::vector<long long>>(),
                         Rational::parse(e.at("value").get<std::string>()));
    for (const auto& n : j.at("notes"))
        r.notes.emplace_back(n.at(0).get<std::string>(), n.at(1).get<std::string>());
    return r;
}

inline std::string report_table(const ExpansionReport& r) {
    std::string out = "kind: " + r.kind + "\n";
    for (const auto& [k, v] : r.values) {
        out += "k = (";
        for (std::size_t i = 0; i < k.size(); ++i) {
            if (i) out += ", ";
            out += std::to_string(k[i]);
        }
        out += "), value \"" + v.str() + "\"\n";
    }
    for (const auto& [a, b] : r.notes) out += "note " + a + ": " + b + "\n";
    return out;
}

} // namespace trec
