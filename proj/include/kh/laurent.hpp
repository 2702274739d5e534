#pragma once

#include <map>
#include <sstream>
#include <string>

#include "kh/rings.hpp"

namespace kh {

/// Laurent polynomial in q with integer coefficients. Zero coefficients
/// are never stored.
class Laurent {
  public:
    Laurent() = default;
    explicit Laurent(Int constant) {
        if (constant != 0) coeffs_[0] = std::move(constant);
    }

    static Laurent monomial(int exponent, Int coeff = 1) {
        Laurent p;
        if (coeff != 0) p.coeffs_[exponent] = std::move(coeff);
        return p;
    }
    /// q + 1/q, the value of a single closed loop.
    static Laurent loop_value() {
        Laurent p;
        p.coeffs_[-1] = 1;
        p.coeffs_[1] = 1;
        return p;
    }

    const std::map<int, Int>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    Int coeff(int exponent) const {
        auto it = coeffs_.find(exponent);
        return it == coeffs_.end() ? Int(0) : it->second;
    }

    Laurent& operator+=(const Laurent& o) {
        for (const auto& [e, c] : o.coeffs_) add_term(e, c);
        return *this;
    }
    Laurent& operator-=(const Laurent& o) {
        for (const auto& [e, c] : o.coeffs_) add_term(e, -c);
        return *this;
    }
    friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
    friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }

    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        Laurent r;
        for (const auto& [ea, ca] : a.coeffs_)
            for (const auto& [eb, cb] : b.coeffs_) r.add_term(ea + eb, ca * cb);
        return r;
    }
    Laurent& operator*=(const Laurent& o) { return *this = *this * o; }

    friend bool operator==(const Laurent& a, const Laurent& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const Laurent& a, const Laurent& b) { return !(a == b); }

    Laurent pow(int n) const {
        Laurent r(Int(1));
        for (int i = 0; i < n; ++i) r *= *this;
        return r;
    }

    std::string str() const {
        if (coeffs_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : coeffs_) {
            if (!first) os << (c > 0 ? " + " : " - ");
            else if (c < 0) os << "-";
            Int a = c < 0 ? Int(-c) : c;
            if (a != 1 || e == 0) os << a.str();
            if (e != 0) {
                if (a != 1) os << "*";
                os << "q";
                if (e != 1) os << "^" << e;
            }
            first = false;
        }
        return os.str();
    }

  private:
    void add_term(int e, const Int& c) {
        auto it = coeffs_.find(e);
        if (it == coeffs_.end()) {
            if (c != 0) coeffs_[e] = c;
        } else {
            it->second += c;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    std::map<int, Int> coeffs_;
};

}  // namespace kh
