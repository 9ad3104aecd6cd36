#pragma once

#include <string>

#include "fheight/poly.hpp"

namespace fheight {

/// Element of K = F_q(T) in lowest terms with monic denominator.
class RatFunc {
public:
    RatFunc() = default;
    explicit RatFunc(const GF& f) : num_(f), den_(Poly::constant(f, 1)) {}
    RatFunc(const Poly& num);
    /// Normalizes; throws DivisionByZero if den is zero.
    RatFunc(const Poly& num, const Poly& den);

    static RatFunc constant(const GF& f, Elt c) { return RatFunc(Poly::constant(f, c)); }
    static RatFunc T(const GF& f) { return RatFunc(Poly::x(f)); }

    const GF& field() const { return num_.field(); }
    const Poly& num() const noexcept { return num_; }
    const Poly& den() const noexcept { return den_; }
    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_one() const noexcept { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const noexcept { return den_.degree() == 0; }
    bool is_constant() const noexcept { return den_.degree() == 0 && num_.degree() <= 0; }
    /// Value in F_q when is_constant().
    Elt constant_value() const noexcept { return num_.is_zero() ? 0 : num_[0]; }
    /// max(deg num, deg den)
    int height() const noexcept;

    RatFunc inv() const;
    RatFunc operator-() const { return RatFunc(-num_, den_, true); }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inv(); }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    RatFunc scale(Elt c) const { return RatFunc(num_.scale(c), den_, true); }
    /// a^e for any integer e (e < 0 inverts).
    RatFunc pow(long long e) const;
    /// a^(q^k): coefficients are fixed by the q-power map, so T -> T^(q^k).
    RatFunc frobenius_q(unsigned k = 1) const;
    /// Substitute T -> g.
    RatFunc compose(const RatFunc& g) const;

    std::string to_string(const std::string& var = "T") const;

private:
    RatFunc(Poly num, Poly den, bool /*already canonical*/) : num_(std::move(num)), den_(std::move(den)) {}
    Poly num_;
    Poly den_;
};

/// Total order used for deterministic output (height, then den, then num).
bool ratfunc_less(const RatFunc& a, const RatFunc& b);

/// Substitute T -> T^m in a polynomial.
Poly inflate(const Poly& f, std::uint64_t m);

}  // namespace fheight
