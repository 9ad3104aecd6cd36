#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fheight/gf.hpp"

namespace fheight {

/// Univariate polynomial over a finite field; coefficients stored low to high,
/// always trimmed so the leading coefficient is nonzero.
class Poly {
public:
    Poly() = default;
    explicit Poly(const GF& f) : f_(&f) {}
    Poly(const GF& f, std::vector<Elt> coeffs);

    static Poly constant(const GF& f, Elt c) { return Poly(f, {c}); }
    static Poly x(const GF& f) { return Poly(f, {0, 1}); }
    static Poly monomial(const GF& f, Elt c, std::size_t k);

    const GF& field() const { return *f_; }
    const GF* field_ptr() const { return f_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
    bool is_constant() const noexcept { return c_.size() <= 1; }
    bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }
    Elt lead() const noexcept { return c_.empty() ? 0 : c_.back(); }
    Elt operator[](std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    const std::vector<Elt>& coeffs() const noexcept { return c_; }

    Poly monic() const;
    Poly scale(Elt a) const;
    Poly shift(std::size_t k) const;  // times x^k
    Poly derivative() const;
    Elt eval(Elt a) const;
    Poly compose(const Poly& g) const;
    /// Coefficients mapped through an embedding into a larger field.
    Poly map(const FieldEmbedding& e) const;
    /// Apply a -> a^(p^k) coefficientwise.
    Poly frobenius_coeffs(unsigned k) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator/(const Poly& a, const Poly& b);
    friend Poly operator%(const Poly& a, const Poly& b);
    Poly operator-() const;
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    /// (quotient, remainder)
    static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);

    std::string to_string(const std::string& var = "T") const;

private:
    void trim();
    const GF* f_ = nullptr;
    std::vector<Elt> c_;
};

/// Degree first, then coefficients compared from the top down.
bool poly_less(const Poly& a, const Poly& b);

Poly pow(const Poly& a, std::uint64_t e);
Poly pow_mod(const Poly& a, const BigInt& e, const Poly& m);
Poly pow_mod(const Poly& a, std::uint64_t e, const Poly& m);
/// Monic gcd (zero if both are zero).
Poly gcd(const Poly& a, const Poly& b);
/// g = s*a + t*b with g monic.
Poly xgcd(const Poly& a, const Poly& b, Poly& s, Poly& t);

struct Factor {
    Poly poly;
    int mult;
};

using Rng = std::mt19937_64;

/// Monic irreducible factorization; sorted by (degree, lexicographic).
/// The leading unit is dropped.
std::vector<Factor> factor(const Poly& f, Rng& rng);
std::vector<Factor> factor(const Poly& f);
std::vector<Factor> squarefree_factor(const Poly& f);
bool is_irreducible(const Poly& f);
/// Distinct roots in the coefficient field, ascending by index.
std::vector<Elt> roots(const Poly& f);
/// Square root if f is a perfect square (up to a square leading unit).
bool poly_sqrt(const Poly& f, Poly& root);

}  // namespace fheight
