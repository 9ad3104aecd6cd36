#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "fheight/laurent.hpp"
#include "fheight/place.hpp"
#include "fheight/ratfunc.hpp"

namespace fheight {

/// Polynomial over K, coefficients low to high, trimmed.
using KPoly = std::vector<RatFunc>;

KPoly kpoly_trim(KPoly a);
KPoly kpoly_mul(const KPoly& a, const KPoly& b);
void kpoly_divmod(const KPoly& a, const KPoly& b, KPoly& q, KPoly& r);
KPoly kpoly_derivative(const KPoly& a);
/// Monic gcd.
KPoly kpoly_gcd(const KPoly& a, const KPoly& b);
std::string kpoly_to_string(const KPoly& a, const std::string& var = "x");

struct ExtBranch;

/// L = K[x]/(f) with f monic irreducible over K = F_q(T).
class ExtField : public std::enable_shared_from_this<ExtField> {
public:
    /// Verifies irreducibility (NotIrreducible otherwise).
    static std::shared_ptr<const ExtField> make(const GF& f, const KPoly& minpoly);
    /// K itself, as K[x]/(x).
    static std::shared_ptr<const ExtField> base(const GF& f);

    const GF& field() const { return *f_; }
    int degree() const noexcept { return static_cast<int>(minpoly_.size()) - 1; }
    const KPoly& minpoly() const noexcept { return minpoly_; }
    std::string minpoly_string() const { return kpoly_to_string(minpoly_); }
    /// x^q mod f, used for Frobenius.
    const std::vector<RatFunc>& x_to_q() const noexcept { return xq_; }
    /// If f = g(x^(p^k)) with g separable: k and g.
    unsigned inseparable_exponent() const noexcept { return insep_k_; }
    const KPoly& separable_part() const noexcept { return sep_; }

    /// Branch data at working precision N (cached).
    const std::vector<ExtBranch>& branches(const Place& w, long N) const;

private:
    ExtField() = default;
    const GF* f_ = nullptr;
    KPoly minpoly_;
    std::vector<RatFunc> xq_;
    unsigned insep_k_ = 0;
    KPoly sep_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<std::string, long>, std::unique_ptr<std::vector<ExtBranch>>> cache_;
};

using ExtFieldPtr = std::shared_ptr<const ExtField>;

/// Element of L as a polynomial of degree < d in the generator.
class ExtElem {
public:
    ExtElem() = default;
    explicit ExtElem(const ExtField& L);
    ExtElem(const ExtField& L, std::vector<RatFunc> coeffs);
    ExtElem(const ExtField& L, const RatFunc& a);
    static ExtElem generator(const ExtField& L);

    const ExtField& ext() const { return *L_; }
    const GF& field() const { return L_->field(); }
    const std::vector<RatFunc>& coeffs() const noexcept { return c_; }
    bool is_zero() const;
    /// Lies in K.
    bool in_base() const;
    const RatFunc& base_value() const { return c_[0]; }

    friend ExtElem operator+(const ExtElem& a, const ExtElem& b);
    friend ExtElem operator-(const ExtElem& a, const ExtElem& b);
    friend ExtElem operator*(const ExtElem& a, const ExtElem& b);
    friend ExtElem operator/(const ExtElem& a, const ExtElem& b) { return a * b.inv(); }
    ExtElem operator-() const;
    friend bool operator==(const ExtElem& a, const ExtElem& b) { return a.c_ == b.c_; }
    friend bool operator!=(const ExtElem& a, const ExtElem& b) { return !(a == b); }

    ExtElem scale(const RatFunc& a) const;
    ExtElem inv() const;
    ExtElem pow(long long e) const;
    /// beta^(q^k)
    ExtElem frobenius_q(unsigned k = 1) const;
    /// Max height of the coefficients (a cheap size measure).
    int coeff_height() const;

    std::string to_string(const std::string& var = "x") const;

private:
    const ExtField* L_ = nullptr;
    std::vector<RatFunc> c_;
};

}  // namespace fheight
