#include "fheight/elliptic.hpp"

#include <algorithm>

#include "fheight/error.hpp"

namespace fheight {

namespace {

RatFunc konst(const GF& f, long long c) { return RatFunc::constant(f, f.from_int(c)); }

long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// min(floor(v(B)/4), floor(v(C)/6)) with zero coefficients ignored.
long scaling_exponent(long vB, long vC) {
    long k = LONG_MAX;
    if (vB != kInfVal) k = std::min(k, floor_div(vB, 4));
    if (vC != kInfVal) k = std::min(k, floor_div(vC, 6));
    return k;
}

long shifted(long v, long by) { return v == kInfVal ? kInfVal : v - by; }

void classify(LocalData& d) {
    if (d.v_delta == 0) {
        d.type = Reduction::Good;
        d.kodaira = Kodaira::I0;
        d.cmax = 0;
    } else if (d.v_B == 0) {
        d.type = Reduction::Multiplicative;
        d.kodaira = Kodaira::In;
        d.n = d.v_delta;
        long i = d.n / 2;
        d.cmax = make_rational(i * (d.n - i), 2 * d.n);
    } else {
        d.type = Reduction::Additive;
        long v = d.v_delta;
        if (v > 6 && d.v_B == 2) {
            d.kodaira = Kodaira::Ins;
            d.n = v - 6;
            BigRational far = make_rational(d.n + 4, 8), near = make_rational(1, 2);
            d.cmax = far > near ? far : near;
        } else {
            switch (v) {
            case 2: d.kodaira = Kodaira::II; d.cmax = 0; break;
            case 3: d.kodaira = Kodaira::III; d.cmax = make_rational(1, 4); break;
            case 4: d.kodaira = Kodaira::IV; d.cmax = make_rational(1, 3); break;
            case 6: d.kodaira = Kodaira::I0s; d.cmax = make_rational(1, 2); break;
            case 8: d.kodaira = Kodaira::IVs; d.cmax = make_rational(2, 3); break;
            case 9: d.kodaira = Kodaira::IIIs; d.cmax = make_rational(3, 4); break;
            case 10: d.kodaira = Kodaira::IIs; d.cmax = 0; break;
            default: throw Error(ErrorKind::InvalidArgument, "non-minimal model at " + d.place.to_string());
            }
        }
    }
    // Resultant of the duplication pair is a unit times Delta^2.
    long wR = 2 * d.v_delta;
    if (d.k >= 0) {
        d.t_lo = -wR - 8 * d.k;
        d.t_hi = 2 * d.k;
    } else {
        d.t_lo = -wR + 2 * d.k;
        d.t_hi = -8 * d.k;
    }
}

}  // namespace

const char* to_string(Reduction r) {
    switch (r) {
    case Reduction::Good: return "Good";
    case Reduction::Multiplicative: return "Multiplicative";
    case Reduction::Additive: return "Additive";
    }
    return "?";
}

std::string kodaira_symbol(Kodaira k, long n) {
    switch (k) {
    case Kodaira::I0: return "I0";
    case Kodaira::In: return "I" + std::to_string(n);
    case Kodaira::II: return "II";
    case Kodaira::III: return "III";
    case Kodaira::IV: return "IV";
    case Kodaira::I0s: return "I0*";
    case Kodaira::Ins: return "I" + std::to_string(n) + "*";
    case Kodaira::IVs: return "IV*";
    case Kodaira::IIIs: return "III*";
    case Kodaira::IIs: return "II*";
    }
    return "?";
}

std::string ECPoint::to_string() const {
    if (inf) return "O";
    return "(" + x.to_string("t") + ", " + y.to_string("t") + ")";
}

ECurve::ECurve(const RatFunc& B, const RatFunc& C) : B_(B), C_(C) {
    const GF& f = B.field();
    if (f.characteristic() <= 3) throw Error(ErrorKind::UnsupportedCharacteristic, "elliptic curves need p > 3");
    if (discriminant().is_zero()) throw Error(ErrorKind::InvalidArgument, "singular curve: discriminant vanishes");

    // u clears denominators and removes non-minimality at every finite place.
    std::vector<Place> ps;
    for (const RatFunc* a : {&B_, &C_}) {
        if (a->is_zero()) continue;
        ps = merge_places(ps, prime_divisors(a->num()));
        ps = merge_places(ps, prime_divisors(a->den()));
    }
    Poly un = Poly::constant(f, 1), ud = Poly::constant(f, 1);
    for (const auto& w : ps) {
        long k = scaling_exponent(valuation(w, B_), valuation(w, C_));
        if (k > 0) un = un * pow(w.pi(), static_cast<std::uint64_t>(k));
        if (k < 0) ud = ud * pow(w.pi(), static_cast<std::uint64_t>(-k));
    }
    u_ = RatFunc(un, ud);
    RatFunc bw = B_ * u_.pow(-4), cw = C_ * u_.pow(-6);
    BW_ = bw.num();
    CW_ = cw.num();

    Poly dW = discriminant_W();
    auto add_place = [&](const Place& w, long k) {
        LocalData d;
        d.place = w;
        d.k = k;
        d.v_B = shifted(valuation(w, BW_), 4 * k);
        d.v_C = shifted(valuation(w, CW_), 6 * k);
        d.v_delta = valuation(w, dW) - 12 * k;
        classify(d);
        local_.push_back(std::move(d));
    };
    Place inf = Place::infinite(f);
    long kinf = scaling_exponent(valuation(inf, BW_), valuation(inf, CW_));
    add_place(inf, kinf);
    for (const auto& w : prime_divisors(dW)) add_place(w, 0);
}

RatFunc ECurve::discriminant() const {
    const GF& f = field();
    return konst(f, -16) * (konst(f, 4) * B_.pow(3) + konst(f, 27) * C_.pow(2));
}

Poly ECurve::discriminant_W() const {
    const GF& f = field();
    return (pow(BW_, std::uint64_t{3}).scale(f.from_int(4)) + (CW_ * CW_).scale(f.from_int(27))).scale(f.from_int(-16));
}

RatFunc ECurve::j() const {
    const GF& f = field();
    RatFunc c4 = konst(f, -48) * B_;
    return c4.pow(3) / discriminant();
}

bool ECurve::semistable() const {
    return std::none_of(local_.begin(), local_.end(), [](const LocalData& d) { return d.type == Reduction::Additive; });
}

bool ECurve::contains(const ECPoint& P) const {
    if (P.inf) return true;
    return P.y * P.y == P.x.pow(3) + B_ * P.x + C_;
}

ECPoint ECurve::to_working(const ECPoint& P) const {
    if (P.inf) return P;
    return ECPoint::affine(P.x * u_.pow(-2), P.y * u_.pow(-3));
}

ECPoint ECurve::from_working(const ECPoint& P) const {
    if (P.inf) return P;
    return ECPoint::affine(P.x * u_.pow(2), P.y * u_.pow(3));
}

std::string ECurve::to_string() const {
    return "y^2 = x^3 + (" + B_.to_string("t") + ")x + (" + C_.to_string("t") + ")";
}

ECPoint ec_neg(const ECPoint& P) {
    if (P.inf) return P;
    return ECPoint::affine(P.x, -P.y);
}

ECPoint ec_double(const ECurve& E, const ECPoint& P) {
    if (P.inf || P.y.is_zero()) return ECPoint::identity();
    const GF& f = E.field();
    RatFunc lam = (konst(f, 3) * P.x * P.x + E.B()) / (konst(f, 2) * P.y);
    RatFunc x3 = lam * lam - konst(f, 2) * P.x;
    return ECPoint::affine(x3, lam * (P.x - x3) - P.y);
}

ECPoint ec_add(const ECurve& E, const ECPoint& P, const ECPoint& Q) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    if (P.x == Q.x) {
        if (P.y == Q.y) return ec_double(E, P);
        return ECPoint::identity();
    }
    RatFunc lam = (Q.y - P.y) / (Q.x - P.x);
    RatFunc x3 = lam * lam - P.x - Q.x;
    return ECPoint::affine(x3, lam * (P.x - x3) - P.y);
}

ECPoint ec_mul(const ECurve& E, const ECPoint& P, long n) {
    if (n < 0) return ec_mul(E, ec_neg(P), -n);
    ECPoint acc = ECPoint::identity(), base = P;
    while (n) {
        if (n & 1) acc = ec_add(E, acc, base);
        n >>= 1;
        if (n) base = ec_double(E, base);
    }
    return acc;
}

CurveProfile curve_profile(const ECurve& E) {
    RatFunc j = E.j();
    if (j.is_constant()) throw Error(ErrorKind::IsotrivialCurve, "j-invariant is constant");
    CurveProfile pr;
    for (const auto& d : E.local_data()) {
        long deg = d.place.degree();
        pr.d_EK += deg * d.v_delta;
        pr.f_EK += deg * (d.type == Reduction::Good ? 0 : d.type == Reduction::Multiplicative ? 1 : 2);
    }
    pr.deg_j = j.height();
    const long p = E.field().characteristic();
    auto only_multiples = [](const Poly& g, long m) {
        for (std::size_t i = 0; i < g.coeffs().size(); ++i)
            if (g[i] != 0 && i % static_cast<std::size_t>(m) != 0) return false;
        return true;
    };
    while (only_multiples(j.num(), pr.p_e * p) && only_multiples(j.den(), pr.p_e * p)) pr.p_e *= p;
    pr.deg_s = pr.deg_j / pr.p_e;
    pr.semistable = E.semistable();
    return pr;
}

}  // namespace fheight
