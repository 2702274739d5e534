#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace kh {

using Int      = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Prime-field element with a runtime modulus. The modulus is scoped
/// per thread (see FpScope); elements constructed inside a scope are
/// reduced against it. Mixing elements from different scopes is a bug
/// and is checked in debug builds.
class Fp {
  public:
    Fp() : v_(0), p_(current_modulus()) {}
    Fp(long n) : p_(current_modulus()) { v_ = normalize(n, p_); }
    Fp(const Int& n) : p_(current_modulus()) {
        Int r = n % p_;
        if (r < 0) r += p_;
        v_ = static_cast<std::uint64_t>(r);
    }

    static std::uint32_t current_modulus() { return modulus_; }
    static void set_modulus(std::uint32_t p) {
        if (p < 2) throw std::invalid_argument("Fp modulus must be >= 2");
        modulus_ = p;
    }

    std::uint64_t value() const { return v_; }
    std::uint32_t modulus() const { return p_; }

    Fp operator-() const { return make(v_ == 0 ? 0 : p_ - v_, p_); }
    Fp& operator+=(const Fp& o) { check(o); v_ = (v_ + o.v_) % p_; return *this; }
    Fp& operator-=(const Fp& o) { check(o); v_ = (v_ + p_ - o.v_) % p_; return *this; }
    Fp& operator*=(const Fp& o) { check(o); v_ = (v_ * o.v_) % p_; return *this; }
    friend Fp operator+(Fp a, const Fp& b) { return a += b; }
    friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
    friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
    friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Fp& a, const Fp& b) { return a.v_ != b.v_; }
    friend bool operator<(const Fp& a, const Fp& b) { return a.v_ < b.v_; }

    Fp inverse() const {
        // extended Euclid; p is prime so any nonzero element is invertible
        if (v_ == 0) throw std::domain_error("Fp: inverse of zero");
        std::int64_t t = 0, nt = 1, r = p_, nr = static_cast<std::int64_t>(v_);
        while (nr != 0) {
            std::int64_t q = r / nr;
            std::int64_t tmp = t - q * nt; t = nt; nt = tmp;
            tmp = r - q * nr; r = nr; nr = tmp;
        }
        if (t < 0) t += p_;
        return make(static_cast<std::uint64_t>(t), p_);
    }

  private:
    static Fp make(std::uint64_t v, std::uint32_t p) { Fp x; x.v_ = v; x.p_ = p; return x; }
    static std::uint64_t normalize(long n, std::uint32_t p) {
        long r = n % static_cast<long>(p);
        if (r < 0) r += p;
        return static_cast<std::uint64_t>(r);
    }
    void check(const Fp& o) const {
        (void)o;
#ifndef NDEBUG
        if (p_ != o.p_) throw std::logic_error("Fp: mixed moduli");
#endif
    }
    static thread_local std::uint32_t modulus_;

    std::uint64_t v_;
    std::uint32_t p_;
};

inline thread_local std::uint32_t Fp::modulus_ = 2;

/// RAII guard that sets the thread's 𝔽_p modulus for the duration of a
/// computation and restores the previous one afterwards.
class FpScope {
  public:
    explicit FpScope(std::uint32_t p) : prev_(Fp::current_modulus()) { Fp::set_modulus(p); }
    ~FpScope() { Fp::set_modulus(prev_); }
    FpScope(const FpScope&) = delete;
    FpScope& operator=(const FpScope&) = delete;

  private:
    std::uint32_t prev_;
};

// Ring trait hooks used by the simplification pipeline. A "unit" is an
// invertible scalar; over Z that means +-1, over a field any nonzero value.
template <class R> struct RingTraits;

template <> struct RingTraits<Int> {
    static constexpr bool is_field = false;
    static bool is_zero(const Int& x) { return x == 0; }
    static bool is_unit(const Int& x) { return x == 1 || x == -1; }
    static Int inverse(const Int& x) { return x; }  // only called on +-1
    static std::string name() { return "Z"; }
    static std::string to_string(const Int& x) { return x.str(); }
};

template <> struct RingTraits<Rational> {
    static constexpr bool is_field = true;
    static bool is_zero(const Rational& x) { return x == 0; }
    static bool is_unit(const Rational& x) { return x != 0; }
    static Rational inverse(const Rational& x) { return 1 / x; }
    static std::string name() { return "Q"; }
    static std::string to_string(const Rational& x) {
        return boost::multiprecision::denominator(x) == 1
                   ? boost::multiprecision::numerator(x).str()
                   : boost::multiprecision::numerator(x).str() + "/" +
                         boost::multiprecision::denominator(x).str();
    }
};

template <> struct RingTraits<Fp> {
    static constexpr bool is_field = true;
    static bool is_zero(const Fp& x) { return x.value() == 0; }
    static bool is_unit(const Fp& x) { return x.value() != 0; }
    static Fp inverse(const Fp& x) { return x.inverse(); }
    static std::string name() { return "F" + std::to_string(Fp::current_modulus()); }
    static std::string to_string(const Fp& x) { return std::to_string(x.value()); }
};

}  // namespace kh
