#pragma once

// Exact partial-fraction representation of a stable correlator: a symmetric
// n-linear combination of the basis 1-forms dz/(z-a)^m over branch points a
// and pole orders m in [2, 6g-4+2n].
//
// Entries are stored once per sorted basis tuple; the stored value is the
// coefficient of EVERY ordered arrangement of that tuple (the tensor is
// symmetric, which the engine verifies rather than imposes).

#include "trec/rational.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace trec {

struct BasisForm {
    int bp; // branch point index into the curve's sorted branch point list
    int m;  // pole order
    friend bool operator==(const BasisForm&, const BasisForm&) = default;
    friend auto operator<=>(const BasisForm&, const BasisForm&) = default;
};

class CorrelatorTensor {
public:
    CorrelatorTensor() : g_(0), n_(0) {}
    CorrelatorTensor(long g, long n, std::vector<Rational> bp_values)
        : g_(g), n_(n), bps_(std::move(bp_values)) {}

    long g() const { return g_; }
    long n() const { return n_; }
    const std::vector<Rational>& branch_points() const { return bps_; }
    const std::map<std::vector<BasisForm>, Rational>& entries() const { return e_; }
    bool empty() const { return e_.empty(); }

    static std::vector<BasisForm> canonical(std::vector<BasisForm> key) {
        std::sort(key.begin(), key.end());
        return key;
    }

    void add(std::vector<BasisForm> key, const Rational& v) {
        if (v.is_zero()) return;
        if (static_cast<long>(key.size()) != n_)
            throw std::logic_error("tensor: key arity mismatch");
        auto k = canonical(std::move(key));
        auto it = e_.find(k);
        if (it == e_.end()) {
            e_.emplace(std::move(k), v);
        } else {
            it->second += v;
            if (it->second.is_zero()) e_.erase(it);
        }
    }

    // Coefficient of an ordered slot assignment.
    Rational coeff(std::vector<BasisForm> key) const {
        auto k = canonical(std::move(key));
        auto it = e_.find(k);
        return it == e_.end() ? Rational(0) : it->second;
    }

    int max_pole_order() const {
        int m = 0;
        for (const auto& [k, v] : e_)
            for (const auto& b : k) m = std::max(m, b.m);
        return m;
    }
    int min_pole_order() const {
        int m = 1 << 20;
        for (const auto& [k, v] : e_)
            for (const auto& b : k) m = std::min(m, b.m);
        return e_.empty() ? 0 : m;
    }

    CorrelatorTensor scaled(const Rational& f) const {
        CorrelatorTensor t(g_, n_, bps_);
        if (f.is_zero()) return t;
        for (const auto& [k, v] : e_) t.e_.emplace(k, v * f);
        return t;
    }

    friend CorrelatorTensor operator-(const CorrelatorTensor& a, const CorrelatorTensor& b) {
        CorrelatorTensor t(a.g_, a.n_, a.bps_);
        t.e_ = a.e_;
        for (const auto& [k, v] : b.e_) {
            auto it = t.e_.find(k);
            if (it == t.e_.end()) {
                t.e_.emplace(k, -v);
            } else {
                it->second -= v;
                if (it->second.is_zero()) t.e_.erase(it);
            }
        }
        return t;
    }

    friend bool operator==(const CorrelatorTensor& a, const CorrelatorTensor& b) {
        return a.g_ == b.g_ && a.n_ == b.n_ && a.e_ == b.e_;
    }

    // First differing entry against another tensor, for failure certificates.
    std::string first_difference(const CorrelatorTensor& other) const {
        CorrelatorTensor d = *this - other;
        if (d.e_.empty()) return "";
        const auto& [k, v] = *d.e_.begin();
        std::string s = "poles [";
        for (std::size_t i = 0; i < k.size(); ++i) {
            if (i) s += ", ";
            s += "(" + bps_[static_cast<std::size_t>(k[i].bp)].str() + "," +
                 std::to_string(k[i].m) + ")";
        }
        s += "] differ by " + v.str();
        return s;
    }

    std::string str() const {
        std::string s = "omega(g=" + std::to_string(g_) + ",n=" + std::to_string(n_) + "):";
        for (const auto& [k, v] : e_) {
            s += "\n  [";
            for (std::size_t i = 0; i < k.size(); ++i) {
                if (i) s += ", ";
                s += "(" + bps_[static_cast<std::size_t>(k[i].bp)].str() + "," +
                     std::to_string(k[i].m) + ")";
            }
            s += "] = " + v.str();
        }
        if (e_.empty()) s += " 0";
        return s;
    }

private:
    long g_, n_;
    std::vector<Rational> bps_;
    std::map<std::vector<BasisForm>, Rational> e_;
};

} // namespace trec
