#include <algorithm>

#include "fheight/elliptic.hpp"
#include "fheight/error.hpp"
#include "fheight/ext_places.hpp"

namespace fheight {

namespace {

const LocalData* find_local(const ECurve& E, const Place& w) {
    for (const auto& d : E.local_data())
        if (d.place == w) return &d;
    return nullptr;
}

RatFunc uniformizer(const Place& w) { return w.is_infinite() ? RatFunc::T(w.field()).inv() : RatFunc(w.pi()); }

BigRational half_pole(long v) { return v < 0 ? make_rational(-v, 2) : BigRational(0); }

// Elements of K_w as pi^v * u + O(pi^(v + rel)) with u a unit polynomial mod pi^rel.
// Works directly in F_q[t]/(pi^rel) (or F_q[s]/(s^rel), s = 1/t, at infinity), so no residue field is built.
struct Adic {
    long v = 0;
    Poly u;
    long rel = 0;  // 0: nothing known beyond O(pi^v)
    bool zero = false;  // exact zero

    long abs_prec() const { return zero ? LONG_MAX : v + rel; }
    long valuation() const {
        if (zero) return LONG_MAX;
        if (rel == 0) throw PrecisionNeeded{v};
        return v;
    }
};

class AdicRing {
public:
    AdicRing(const Place& w, long M) : w_(w), pi_(w.is_infinite() ? Poly::x(w.field()) : w.pi()), M_(M) {}

    Adic from(const RatFunc& a) const {
        if (a.is_zero()) return zero();
        if (w_.is_infinite()) {
            Adic n = unit_part(reversed(a.num())), d = unit_part(reversed(a.den()));
            Adic r = mul(n, inv(d));
            r.v = a.den().degree() - a.num().degree();
            return r;
        }
        return mul(unit_part(a.num()), inv(unit_part(a.den())));
    }

    Adic zero() const {
        Adic z;
        z.zero = true;
        return z;
    }

    Adic mul(const Adic& a, const Adic& b) const {
        if (a.zero || b.zero) return zero();
        Adic r;
        r.v = a.v + b.v;
        r.rel = std::min(a.rel, b.rel);
        if (r.rel > 0) r.u = (a.u * b.u) % pipow(r.rel);
        return r;
    }

    Adic add(const Adic& a, const Adic& b) const {
        if (a.zero) return b;
        if (b.zero) return a;
        long top = std::min(a.abs_prec(), b.abs_prec());
        long v0 = std::min(a.v, b.v);
        Adic r;
        if (v0 >= top) {
            r.v = top;
            return r;
        }
        long n = top - v0;
        Poly s(field());
        for (const Adic* x : {&a, &b})
            if (x->rel > 0) s = s + x->u * pipow(x->v - v0);
        s = s % pipow(n);
        long k = 0;
        while (k < n && !s.is_zero()) {
            Poly q, rem;
            Poly::divmod(s, pi_, q, rem);
            if (!rem.is_zero()) break;
            s = std::move(q);
            ++k;
        }
        if (s.is_zero()) {
            r.v = top;
            return r;
        }
        r.v = v0 + k;
        r.rel = top - r.v;
        r.u = s % pipow(r.rel);
        return r;
    }

    Adic neg(const Adic& a) const { return scale(a, field().neg(1)); }

    Adic scale(const Adic& a, Elt c) const {
        if (a.zero || c == 0) return c == 0 ? zero() : a;
        Adic r = a;
        r.u = r.u.scale(c);
        return r;
    }

    Adic inv(const Adic& a) const {
        if (a.zero) throw Error(ErrorKind::DivisionByZero, "local inverse of zero");
        a.valuation();
        Poly s, t;
        xgcd(a.u, pipow(a.rel), s, t);
        Adic r;
        r.v = -a.v;
        r.rel = a.rel;
        r.u = s % pipow(a.rel);
        return r;
    }

private:
    const GF& field() const { return w_.field(); }

    Poly reversed(const Poly& g) const {
        std::vector<Elt> c(g.coeffs().rbegin(), g.coeffs().rend());
        return Poly(field(), c);
    }

    Adic unit_part(Poly g) const {
        Adic r;
        while (true) {
            Poly q, rem;
            Poly::divmod(g, pi_, q, rem);
            if (!rem.is_zero()) break;
            g = std::move(q);
            ++r.v;
        }
        r.rel = M_;
        r.u = g % pipow(M_);
        return r;
    }

    const Poly& pipow(long k) const {
        while (static_cast<long>(pows_.size()) <= k) pows_.push_back(pows_.empty() ? Poly::constant(field(), 1) : pows_.back() * pi_);
        return pows_[static_cast<std::size_t>(k)];
    }

    Place w_;
    Poly pi_;
    long M_;
    mutable std::vector<Poly> pows_;
};

// min(v(F), v(G)) once the smaller of the two is certified.
long certified_min(const Adic& F, const Adic& G) {
    bool kf = F.zero || F.rel > 0, kg = G.zero || G.rel > 0;
    long bf = F.zero ? LONG_MAX : F.v, bg = G.zero ? LONG_MAX : G.v;
    if (kf && kg) return std::min(bf, bg);
    if (kf && bf <= bg) return bf;
    if (kg && bg <= bf) return bg;
    throw PrecisionNeeded{std::min(bf, bg)};
}

// Doubling defects 4 min(w(x_n), 0) - min(w F(x_n), w G(x_n)) along x_{n+1} = F/G, computed in K_w.
std::vector<long> local_defects(const ECurve& E, const LocalData& d, const RatFunc& xW, int N) {
    return with_precision(
        [&](long rel) {
            AdicRing K(d.place, rel);
            const GF& f = E.field();
            const Elt two = f.from_int(2), four = f.from_int(4), eight = f.from_int(8);
            Adic B = K.from(RatFunc(E.BW())), C = K.from(RatFunc(E.CW()));
            Adic BB = K.mul(B, B);
            Adic x = K.from(xW);
            std::vector<long> out;
            out.reserve(static_cast<std::size_t>(N));
            for (int n = 0; n < N; ++n) {
                Adic x2 = K.mul(x, x);
                Adic F = K.add(K.add(K.mul(x2, x2), K.neg(K.scale(K.mul(B, x2), two))), K.add(K.neg(K.scale(K.mul(C, x), eight)), BB));
                Adic G = K.scale(K.add(K.add(K.mul(x2, x), K.mul(B, x)), C), four);
                long vx = x.zero ? 0 : std::min(x.valuation(), 0L);
                out.push_back(4 * vx - certified_min(F, G));
                if (n + 1 < N) x = K.mul(F, K.inv(G));
            }
            return out;
        },
        32);
}

BigRational pow4(int n) { return BigRational(ipow(BigInt(4), static_cast<unsigned long>(n))); }

}  // namespace

BigRational naive_height_x(const ECurve& E, const ECPoint& P) {
    if (P.inf) return 0;
    return E.to_working(P).x.height();
}

DoublingBounds doubling_bounds(const ECurve& E) {
    DoublingBounds b;
    for (const auto& d : E.local_data()) {
        b.L += d.place.degree() * d.t_lo;
        b.U += d.place.degree() * d.t_hi;
    }
    return b;
}

long torsion_order(const ECurve& E, const ECPoint& P) {
    // A torsion point Q has 0 = 2 hhat(Q) >= h(x(Q)) + L/3.
    BigRational R0 = -doubling_bounds(E).L / 3;
    ECPoint Q = P;
    for (long k = 1;; ++k) {
        if (Q.inf) return k;
        if (naive_height_x(E, Q) > R0) return 0;
        Q = ec_add(E, Q, P);
    }
}

HeightInterval canonical_height(const ECurve& E, const ECPoint& P, const BigRational& width, int cap) {
    HeightInterval r;
    if (P.inf) {
        r.torsion_order = 1;
        return r;
    }
    if (!E.contains(P)) throw Error(ErrorKind::NotOnCurve, P.to_string());
    if (long ord = torsion_order(E, P)) {
        r.torsion_order = ord;
        return r;
    }
    DoublingBounds db = doubling_bounds(E);
    int N = 0;
    while ((db.U - db.L) / (6 * pow4(N)) > width) {
        if (++N > cap) throw Error(ErrorKind::WidthNotReached, "width " + to_fraction_string(width) + " needs more than " + std::to_string(cap) + " doublings");
    }
    ECPoint PW = E.to_working(P);
    BigRational s = PW.x.height();
    for (const auto& d : E.local_data()) {
        if (d.t_lo == 0 && d.t_hi == 0) continue;
        auto T = local_defects(E, d, PW.x, N);
        BigRational acc;
        for (int n = 0; n < N; ++n) acc += BigRational(T[static_cast<std::size_t>(n)]) / pow4(n + 1);
        s += d.place.degree() * acc;
    }
    r.lo = (s + db.L / (3 * pow4(N))) / 2;
    r.hi = (s + db.U / (3 * pow4(N))) / 2;
    if (r.lo < 0) r.lo = 0;
    r.iterations = N;
    return r;
}

BigRational neron_local(const ECurve& E, const Place& w, const ECPoint& P, bool semistable_only) {
    if (P.inf) throw Error(ErrorKind::InvalidArgument, "local height is undefined at O");
    ECPoint PW = E.to_working(P);
    const LocalData* d = find_local(E, w);
    if (!d) return half_pole(valuation(w, PW.x));
    if (semistable_only && d->type == Reduction::Additive) throw Error(ErrorKind::NonSemistablePlace, w.to_string());
    const GF& f = E.field();
    RatFunc pi = uniformizer(w);
    RatFunc x = PW.x * pi.pow(-2 * d->k), y = PW.y * pi.pow(-3 * d->k);
    RatFunc B = RatFunc(E.BW()) * pi.pow(-4 * d->k), C = RatFunc(E.CW()) * pi.pow(-6 * d->k);
    auto c = [&](long n) { return RatFunc::constant(f, f.from_int(n)); };
    BigRational base = half_pole(valuation(w, x)) + make_rational(d->v_delta, 12);
    long v_dx = valuation(w, c(3) * x * x + B);
    long v_psi2 = valuation(w, c(2) * y);
    if (v_dx <= 0 || v_psi2 <= 0) return base;  // non-singular reduction
    if (d->type == Reduction::Multiplicative) {
        long N = d->v_delta;
        BigRational M = BigRational(v_psi2);
        if (M > make_rational(N, 2)) M = make_rational(N, 2);
        return base - M * (N - M) / (2 * N);
    }
    if (d->type == Reduction::Good) throw Error(ErrorKind::InvalidArgument, "singular reduction at a good place");
    long v_psi3 = valuation(w, c(3) * x.pow(4) + c(6) * B * x * x + c(12) * C * x - B * B);
    if (v_psi3 >= 3 * v_psi2) return base - make_rational(v_psi2, 3);
    return base - make_rational(v_psi3, 8);
}

BigRational exact_height(const ECurve& E, const ECPoint& P, bool semistable_only) {
    if (P.inf) return 0;
    ECPoint PW = E.to_working(P);
    BigRational s = BigRational(PW.x.height()) / 2;
    for (const auto& d : E.local_data())
        s += d.place.degree() * (neron_local(E, d.place, P, semistable_only) - half_pole(valuation(d.place, PW.x)));
    return s;
}

long search_radius(const ECurve& E, const BigRational& bound) {
    BigRational r = 2 * bound;
    for (const auto& d : E.local_data()) {
        long deg = d.place.degree();
        r += deg * (2 * d.cmax - make_rational(d.v_delta, 6) + 2 * std::max(0L, -d.k));
    }
    return floor_to_int(r).get_si();
}

}  // namespace fheight
