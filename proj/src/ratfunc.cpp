#include "fheight/ratfunc.hpp"

#include <algorithm>

#include "fheight/error.hpp"

namespace fheight {

RatFunc::RatFunc(const Poly& num) : num_(num), den_(Poly::constant(num.field(), 1)) {}

RatFunc::RatFunc(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw Error(ErrorKind::DivisionByZero, "rational function with zero denominator");
    const GF& f = den.field();
    if (num.is_zero()) {
        num_ = Poly(f);
        den_ = Poly::constant(f, 1);
        return;
    }
    Poly g = gcd(num, den);
    Poly n = g.is_one() ? num : num / g;
    Poly d = g.is_one() ? den : den / g;
    Elt li = f.inv(d.lead());
    num_ = n.scale(li);
    den_ = d.scale(li);
}

int RatFunc::height() const noexcept {
    if (num_.is_zero()) return 0;
    return std::max(num_.degree(), den_.degree());
}

RatFunc RatFunc::inv() const {
    if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero in F_q(T)");
    Elt li = field().inv(num_.lead());
    return RatFunc(den_.scale(li), num_.scale(li), true);
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return RatFunc(a.field());
    if (a.is_polynomial() && b.is_polynomial()) return RatFunc(a.num_ * b.num_, a.den_, true);
    // cross-cancel to keep intermediate degrees small
    Poly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
    Poly n = (a.num_ / g1) * (b.num_ / g2);
    Poly d = (a.den_ / g2) * (b.den_ / g1);
    Elt li = a.field().inv(d.lead());
    return RatFunc(n.scale(li), d.scale(li), true);
}

RatFunc RatFunc::pow(long long e) const {
    if (e < 0) return inv().pow(-e);
    auto ue = static_cast<std::uint64_t>(e);
    return RatFunc(fheight::pow(num_, ue), fheight::pow(den_, ue), true);
}

Poly inflate(const Poly& f, std::uint64_t m) {
    if (f.is_zero() || m == 1) return f;
    std::vector<Elt> out(static_cast<std::size_t>(f.degree()) * m + 1, 0);
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) out[i * m] = f[i];
    return Poly(f.field(), std::move(out));
}

RatFunc RatFunc::frobenius_q(unsigned k) const {
    std::uint64_t m = 1;
    for (unsigned i = 0; i < k; ++i) m *= field().size();
    // coprime and monic stay so under T -> T^m
    return RatFunc(inflate(num_, m), inflate(den_, m), true);
}

RatFunc RatFunc::compose(const RatFunc& g) const {
    auto apply = [&](const Poly& p) {
        RatFunc acc(field());
        for (std::size_t i = p.coeffs().size(); i-- > 0;) acc = acc * g + constant(field(), p[i]);
        return acc;
    };
    return apply(num_) / apply(den_);
}

std::string RatFunc::to_string(const std::string& var) const {
    if (den_.is_one()) return num_.to_string(var);
    auto wrap = [&](const Poly& p) {
        std::string s = p.to_string(var);
        bool simple = s.find_first_of("+*^") == std::string::npos;
        return simple ? s : "(" + s + ")";
    };
    return wrap(num_) + "/" + wrap(den_);
}

bool ratfunc_less(const RatFunc& a, const RatFunc& b) {
    if (a.height() != b.height()) return a.height() < b.height();
    if (a.den() != b.den()) return poly_less(a.den(), b.den());
    if (a.num() != b.num()) return poly_less(a.num(), b.num());
    return false;
}

}  // namespace fheight
