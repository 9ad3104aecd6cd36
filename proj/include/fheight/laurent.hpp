#pragma once

#include <climits>
#include <vector>

#include "fheight/gf.hpp"

namespace fheight {

/// Sentinel precision: the series is known exactly (finitely many terms).
constexpr long kExact = LONG_MAX;

/// Thrown when a truncated series cannot certify what was asked of it;
/// callers catch it, raise the working precision and retry.
struct PrecisionNeeded {
    long have;
};

/// Truncated Laurent series sum_{i} c[i] w^(val+i) + O(w^prec) over a finite field.
/// Exponents >= prec are unknown; prec == kExact means the series is exact.
struct Laurent {
    const GF* f = nullptr;
    long val = 0;
    std::vector<Elt> c;
    long prec = kExact;

    Laurent() = default;
    explicit Laurent(const GF& field) : f(&field) {}

    static Laurent monomial(const GF& field, Elt coeff, long exp);
    static Laurent constant(const GF& field, Elt coeff) { return monomial(field, coeff, 0); }
    /// O(w^prec)
    static Laurent unknown(const GF& field, long prec);
    /// Exact series from coefficients of w^val, w^(val+1), ...
    static Laurent from_coeffs(const GF& field, long val, std::vector<Elt> coeffs, long prec = kExact);

    bool is_exact() const noexcept { return prec == kExact; }
    bool is_exact_zero() const noexcept { return c.empty() && prec == kExact; }
    /// No nonzero term known.
    bool no_terms() const noexcept { return c.empty(); }
    /// Lower bound for the valuation (exact when a term is known).
    long valuation_bound() const noexcept { return c.empty() ? prec : val; }
    /// Valuation with a certified leading term; LONG_MAX for exact zero.
    long valuation() const;
    Elt leading() const noexcept { return c.empty() ? 0 : c[0]; }
    Elt coeff(long k) const noexcept;
    /// Number of known terms after the leading one, i.e. prec - val.
    long relative_precision() const noexcept;

    void normalize();
    /// Keep terms with exponent < valuation_bound() + rel.
    Laurent truncated(long rel) const;
    /// Cut at an absolute precision.
    Laurent cut(long abs_prec) const;
};

long sat_add(long a, long b) noexcept;

Laurent operator+(const Laurent& a, const Laurent& b);
Laurent operator-(const Laurent& a, const Laurent& b);
Laurent operator-(const Laurent& a);
Laurent operator*(const Laurent& a, const Laurent& b);
Laurent scale(const Laurent& a, Elt s);
/// Multiply by w^k.
Laurent shift(const Laurent& a, long k);
/// Inverse; exact non-monomial inputs are expanded to `rel` terms.
Laurent inverse(const Laurent& a, long rel);
Laurent divide(const Laurent& a, const Laurent& b, long rel);
Laurent power(const Laurent& a, long e, long rel);
/// a^(p^k): coefficients raised, exponents scaled.
Laurent frobenius_power(const Laurent& a, unsigned k);
/// The unique b with b^(p^k) = a, expressed in w' where w = w'^(p^k).
Laurent inseparable_root(const Laurent& a, unsigned k);
/// Map coefficients through emb and substitute w = C * w'^E.
Laurent substitute(const Laurent& a, const FieldEmbedding& emb, Elt C, long E);
/// sum_i coeffs[i] * x^i by Horner, truncating to rel relative terms per step.
Laurent horner(const std::vector<Laurent>& coeffs, const Laurent& x, long rel);

}  // namespace fheight
