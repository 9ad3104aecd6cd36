#include "fheight/extfield.hpp"

#include <algorithm>

#include "fheight/error.hpp"
#include "fheight/ext_places.hpp"

namespace fheight {

KPoly kpoly_trim(KPoly a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
    return a;
}

KPoly kpoly_mul(const KPoly& a, const KPoly& b) {
    if (a.empty() || b.empty()) return {};
    const GF& F = a[0].field();
    KPoly r(a.size() + b.size() - 1, RatFunc(F));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
    }
    return kpoly_trim(r);
}

void kpoly_divmod(const KPoly& a, const KPoly& b, KPoly& q, KPoly& r) {
    KPoly bb = kpoly_trim(b);
    if (bb.empty()) throw Error(ErrorKind::DivisionByZero, "division by zero polynomial over K");
    r = kpoly_trim(a);
    if (r.size() < bb.size()) {
        q.clear();
        return;
    }
    const GF& F = bb[0].field();
    q.assign(r.size() - bb.size() + 1, RatFunc(F));
    RatFunc li = bb.back().inv();
    std::size_t db = bb.size() - 1;
    for (std::size_t k = r.size(); k-- > db;) {
        if (r[k].is_zero()) continue;
        RatFunc c = r[k] * li;
        q[k - db] = c;
        for (std::size_t i = 0; i <= db; ++i)
            if (!bb[i].is_zero()) r[k - db + i] -= c * bb[i];
    }
    r.resize(db);
    r = kpoly_trim(r);
    q = kpoly_trim(q);
}

KPoly kpoly_derivative(const KPoly& a) {
    if (a.size() <= 1) return {};
    const GF& F = a[0].field();
    KPoly d(a.size() - 1, RatFunc(F));
    for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i].scale(F.from_int(static_cast<long long>(i)));
    return kpoly_trim(d);
}

namespace {

KPoly kpoly_monic(KPoly a) {
    a = kpoly_trim(a);
    if (a.empty() || a.back().is_one()) return a;
    RatFunc li = a.back().inv();
    for (auto& c : a) c = c * li;
    return a;
}

KPoly kpoly_sub(const KPoly& a, const KPoly& b) {
    if (a.empty() && b.empty()) return {};
    const GF& F = !a.empty() ? a[0].field() : b[0].field();
    KPoly r(std::max(a.size(), b.size()), RatFunc(F));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return kpoly_trim(r);
}

// s*a + t*b = g, returns s (t is not needed by callers).
KPoly kpoly_xgcd_s(const KPoly& a, const KPoly& b, KPoly& g) {
    const GF& F = a[0].field();
    KPoly r0 = kpoly_trim(a), r1 = kpoly_trim(b);
    KPoly s0{RatFunc::constant(F, 1)}, s1{};
    while (!r1.empty()) {
        KPoly q, r;
        kpoly_divmod(r0, r1, q, r);
        KPoly s2 = kpoly_sub(s0, kpoly_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    RatFunc li = r0.back().inv();
    for (auto& c : r0) c = c * li;
    for (auto& c : s0) c = c * li;
    g = r0;
    return s0;
}

bool is_pth_power(const RatFunc& a) {
    std::uint32_t p = a.field().characteristic();
    auto check = [&](const Poly& f) {
        for (std::size_t i = 0; i < f.coeffs().size(); ++i)
            if (f[i] != 0 && i % p != 0) return false;
        return true;
    };
    return check(a.num()) && check(a.den());
}

// Finite places in (degree, lexicographic) order, skipping none.
std::vector<Place> first_places(const GF& F, std::size_t count) {
    std::vector<Place> out{Place::infinite(F)};
    for (int deg = 1; out.size() < count && deg <= 6; ++deg) {
        std::uint64_t total = 1;
        for (int i = 0; i < deg; ++i) total *= F.size();
        for (std::uint64_t idx = 0; idx < total && out.size() < count; ++idx) {
            std::vector<Elt> c(static_cast<std::size_t>(deg) + 1, 0);
            c[static_cast<std::size_t>(deg)] = 1;
            std::uint64_t t = idx;
            // enumerate with c_{deg-1} most significant so the order is lexicographic
            for (int i = 0; i < deg; ++i) {
                c[static_cast<std::size_t>(i)] = static_cast<Elt>(t % F.size());
                t /= F.size();
            }
            Poly pi(F, c);
            if (is_irreducible(pi)) out.push_back(Place::finite(pi));
        }
    }
    return out;
}

}  // namespace

KPoly kpoly_gcd(const KPoly& a, const KPoly& b) {
    KPoly x = kpoly_trim(a), y = kpoly_trim(b);
    while (!y.empty()) {
        KPoly q, r;
        kpoly_divmod(x, y, q, r);
        x = std::move(y);
        y = std::move(r);
    }
    return kpoly_monic(x);
}

std::string kpoly_to_string(const KPoly& a, const std::string& var) {
    if (a.empty()) return "0";
    std::string out;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i].is_zero()) continue;
        std::string cs = a[i].to_string();
        bool compound = cs.find_first_of("+-/") != std::string::npos;
        if (!out.empty()) out += "+";
        std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
        if (i == 0) out += compound ? "(" + cs + ")" : cs;
        else if (a[i].is_one()) out += mono;
        else out += (compound ? "(" + cs + ")" : cs) + "*" + mono;
    }
    return out;
}

std::shared_ptr<const ExtField> ExtField::base(const GF& f) {
    auto L = std::shared_ptr<ExtField>(new ExtField());
    L->f_ = &f;
    L->minpoly_ = {RatFunc(f), RatFunc::constant(f, 1)};
    L->sep_ = L->minpoly_;
    L->xq_ = {RatFunc(f)};
    return L;
}

std::shared_ptr<const ExtField> ExtField::make(const GF& f, const KPoly& minpoly) {
    KPoly m = kpoly_monic(minpoly);
    if (m.size() < 2) throw Error(ErrorKind::InvalidArgument, "minimal polynomial must have degree >= 1");
    auto L = std::shared_ptr<ExtField>(new ExtField());
    L->f_ = &f;
    L->minpoly_ = m;
    const std::uint32_t p = f.characteristic();
    // f = g(x^(p^k)) with g separable
    KPoly g = m;
    unsigned k = 0;
    for (;;) {
        bool all = true;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (!g[i].is_zero() && i % p != 0) all = false;
        if (!all) break;
        KPoly h(g.size() / p + 1, RatFunc(f));
        for (std::size_t i = 0; i < g.size(); i += p) h[i / p] = g[i];
        g = kpoly_trim(h);
        ++k;
    }
    L->insep_k_ = k;
    L->sep_ = g;
    int dg = static_cast<int>(g.size()) - 1;
    if (kpoly_gcd(g, kpoly_derivative(g)).size() > 1)
        throw Error(ErrorKind::NotIrreducible, kpoly_to_string(m) + " has a repeated factor");
    if (k > 0 && std::all_of(g.begin(), g.end(), [](const RatFunc& c) { return is_pth_power(c); }))
        throw Error(ErrorKind::NotIrreducible, kpoly_to_string(m) + " is a p-th power");

    ExtElem X = ExtElem::generator(*L);
    L->xq_ = X.pow(static_cast<long long>(f.size())).coeffs();

    if (dg > 1) {
        // Any factor of g has, at each place w, a degree that is a sum of local degrees.
        std::uint64_t pk = 1;
        for (unsigned i = 0; i < k; ++i) pk *= p;
        std::vector<bool> possible(static_cast<std::size_t>(dg) + 1, true);
        bool certified = false;
        for (const auto& w : first_places(f, 40)) {
            std::vector<PlaceOfExt> vs;
            try {
                vs = places_above(*L, w);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::UnsupportedRamification || e.kind() == ErrorKind::PrecisionExhausted ||
                    e.kind() == ErrorKind::FieldTooLarge)
                    continue;
                throw;
            }
            std::vector<bool> sums(static_cast<std::size_t>(dg) + 1, false);
            sums[0] = true;
            for (const auto& v : vs) {
                long part = v.e * v.f_res / static_cast<long>(pk);
                for (long s = dg; s >= part; --s)
                    if (sums[static_cast<std::size_t>(s - part)]) sums[static_cast<std::size_t>(s)] = true;
            }
            int count = 0;
            for (int s = 0; s <= dg; ++s) {
                possible[static_cast<std::size_t>(s)] = possible[static_cast<std::size_t>(s)] && sums[static_cast<std::size_t>(s)];
                if (possible[static_cast<std::size_t>(s)]) ++count;
            }
            if (count == 2) {
                certified = true;
                break;
            }
        }
        if (!certified) throw Error(ErrorKind::NotIrreducible, "could not certify irreducibility of " + kpoly_to_string(m));
    }
    return L;
}

ExtElem::ExtElem(const ExtField& L) : L_(&L), c_(static_cast<std::size_t>(L.degree()), RatFunc(L.field())) {}

ExtElem::ExtElem(const ExtField& L, std::vector<RatFunc> coeffs) : L_(&L) {
    KPoly q, r;
    kpoly_divmod(coeffs, L.minpoly(), q, r);
    r.resize(static_cast<std::size_t>(L.degree()), RatFunc(L.field()));
    c_ = std::move(r);
}

ExtElem::ExtElem(const ExtField& L, const RatFunc& a) : ExtElem(L) { c_[0] = a; }

ExtElem ExtElem::generator(const ExtField& L) {
    return ExtElem(L, std::vector<RatFunc>{RatFunc(L.field()), RatFunc::constant(L.field(), 1)});
}

bool ExtElem::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const RatFunc& a) { return a.is_zero(); });
}

bool ExtElem::in_base() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (!c_[i].is_zero()) return false;
    return true;
}

ExtElem operator+(const ExtElem& a, const ExtElem& b) {
    ExtElem r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
    return r;
}

ExtElem operator-(const ExtElem& a, const ExtElem& b) {
    ExtElem r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
    return r;
}

ExtElem ExtElem::operator-() const {
    ExtElem r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

ExtElem operator*(const ExtElem& a, const ExtElem& b) {
    if (a.c_.size() == 1) {
        ExtElem r = a;
        r.c_[0] = a.c_[0] * b.c_[0];
        return r;
    }
    return ExtElem(*a.L_, kpoly_mul(kpoly_trim(a.c_), kpoly_trim(b.c_)));
}

ExtElem ExtElem::scale(const RatFunc& a) const {
    ExtElem r = *this;
    for (auto& c : r.c_) c = c * a;
    return r;
}

ExtElem ExtElem::inv() const {
    if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero in L");
    if (c_.size() == 1 || in_base()) {
        ExtElem r(*L_);
        r.c_[0] = c_[0].inv();
        return r;
    }
    KPoly g;
    KPoly s = kpoly_xgcd_s(kpoly_trim(c_), L_->minpoly(), g);
    return ExtElem(*L_, s);
}

ExtElem ExtElem::pow(long long e) const {
    if (e < 0) return inv().pow(-e);
    ExtElem r(*L_, RatFunc::constant(field(), 1)), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

ExtElem ExtElem::frobenius_q(unsigned k) const {
    ExtElem cur = *this;
    for (unsigned it = 0; it < k; ++it) {
        if (cur.c_.size() == 1 || cur.in_base()) {
            cur.c_[0] = cur.c_[0].frobenius_q();
            continue;
        }
        ExtElem X(*L_, L_->x_to_q());
        ExtElem acc(*L_);
        for (std::size_t i = cur.c_.size(); i-- > 0;) {
            acc = acc * X;
            acc.c_[0] += cur.c_[i].frobenius_q();
        }
        cur = acc;
    }
    return cur;
}

int ExtElem::coeff_height() const {
    int h = 0;
    for (const auto& c : c_) h = std::max(h, c.height());
    return h;
}

std::string ExtElem::to_string(const std::string& var) const { return kpoly_to_string(kpoly_trim(c_), var); }

}  // namespace fheight
