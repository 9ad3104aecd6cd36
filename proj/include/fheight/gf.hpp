#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fheight/rational.hpp"

namespace fheight {

/// Field element, encoded as the base-p digit vector of its polynomial
/// representative in F_p[u]/(m): index = sum c_i p^i.
using Elt = std::uint32_t;

/// Finite field F_q = F_p[u]/(m) with m the lexicographically least monic
/// irreducible polynomial of the requested degree. Instances are interned
/// and immutable; `GF::make` always returns the same object for (p, n).
class GF {
public:
    static const GF& make(std::uint32_t p, std::uint32_t degree);

    std::uint32_t characteristic() const noexcept { return p_; }
    std::uint32_t degree() const noexcept { return n_; }
    std::uint64_t size() const noexcept { return q_; }
    BigInt size_big() const { return BigInt(static_cast<unsigned long>(q_)); }
    bool is_prime_field() const noexcept { return n_ == 1; }

    /// Coefficients of m from u^0 to u^n (monic).
    const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

    Elt zero() const noexcept { return 0; }
    Elt one() const noexcept { return 1; }
    /// Image of the integer k in the prime subfield.
    Elt from_int(long long k) const noexcept;
    Elt generator() const noexcept { return n_ == 1 ? 0 : p_; }

    Elt add(Elt a, Elt b) const noexcept {
        if (n_ == 1) {
            Elt s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        if (p_ == 2) return a ^ b;
        if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * q_ + b];
        return add_digits(a, b);
    }
    Elt neg(Elt a) const noexcept { return neg_[a]; }
    Elt sub(Elt a, Elt b) const noexcept { return add(a, neg_[b]); }
    Elt mul(Elt a, Elt b) const noexcept {
        if (a == 0 || b == 0) return 0;
        std::uint64_t s = static_cast<std::uint64_t>(log_[a]) + log_[b];
        if (s >= q_ - 1) s -= q_ - 1;
        return exp_[s];
    }
    Elt inv(Elt a) const;
    Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }
    Elt pow(Elt a, const BigInt& e) const;
    Elt pow(Elt a, std::uint64_t e) const;
    /// a^(p^k)
    Elt frobenius(Elt a, unsigned k = 1) const;
    /// Unique b with b^(p^k) = a.
    Elt frobenius_inverse(Elt a, unsigned k = 1) const;
    bool is_square(Elt a) const noexcept;
    /// Some square root if it exists (the one with the smaller index).
    bool sqrt(Elt a, Elt& root) const;
    /// Element of the prime subfield as an integer, or -1 if not in F_p.
    long long to_prime(Elt a) const noexcept { return a < p_ ? static_cast<long long>(a) : -1; }

    /// Digits of a in base p (length n).
    std::vector<std::uint32_t> digits(Elt a) const;
    Elt from_digits(const std::vector<std::uint32_t>& d) const;

    std::string to_string(Elt a, const std::string& var = "u") const;

    /// The primitive element used for the log tables.
    Elt primitive() const noexcept { return exp_[q_ > 2 ? 1 : 0]; }
    /// Discrete logarithm base primitive(); a must be nonzero.
    std::uint32_t log(Elt a) const noexcept { return log_[a]; }
    Elt exp(std::uint64_t k) const noexcept { return exp_[k % (q_ - 1)]; }

private:
    GF(std::uint32_t p, std::uint32_t n);
    Elt add_digits(Elt a, Elt b) const noexcept;

    std::uint32_t p_;
    std::uint32_t n_;
    std::uint64_t q_;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> log_;
    std::vector<Elt> exp_;
    std::vector<Elt> neg_;
    std::vector<Elt> add_table_;
    std::vector<std::uint64_t> ppow_;
};

bool is_prime(std::uint64_t n);

/// Field homomorphism src -> dst, determined by the image of src's generator.
class FieldEmbedding {
public:
    FieldEmbedding() = default;
    FieldEmbedding(const GF* src, const GF* dst, Elt generator_image);
    /// Identity on `f`.
    static FieldEmbedding identity(const GF* f);
    /// Any embedding (deterministic choice: smallest root of src's modulus).
    static FieldEmbedding find(const GF* src, const GF* dst);

    Elt operator()(Elt a) const;
    const GF* source() const noexcept { return src_; }
    const GF* target() const noexcept { return dst_; }
    FieldEmbedding then(const FieldEmbedding& next) const;

private:
    const GF* src_ = nullptr;
    const GF* dst_ = nullptr;
    std::vector<Elt> powers_;  // images of u^i
    bool identity_ = false;
};

}  // namespace fheight
