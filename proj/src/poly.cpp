#include "fheight/poly.hpp"

#include <algorithm>

#include "fheight/error.hpp"

namespace fheight {

Poly::Poly(const GF& f, std::vector<Elt> coeffs) : f_(&f), c_(std::move(coeffs)) { trim(); }

Poly Poly::monomial(const GF& f, Elt c, std::size_t k) {
    std::vector<Elt> v(k + 1, 0);
    v[k] = c;
    return Poly(f, std::move(v));
}

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::monic() const {
    if (is_zero() || is_monic()) return *this;
    return scale(f_->inv(lead()));
}

Poly Poly::scale(Elt a) const {
    if (a == 0) return Poly(*f_);
    Poly r = *this;
    for (auto& c : r.c_) c = f_->mul(c, a);
    return r;
}

Poly Poly::shift(std::size_t k) const {
    if (is_zero() || k == 0) return *this;
    Poly r(*f_);
    r.c_.assign(k, 0);
    r.c_.insert(r.c_.end(), c_.begin(), c_.end());
    return r;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly(*f_);
    std::vector<Elt> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = f_->mul(c_[i], f_->from_int(static_cast<long long>(i)));
    return Poly(*f_, std::move(d));
}

Elt Poly::eval(Elt a) const {
    Elt acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = f_->add(f_->mul(acc, a), c_[i]);
    return acc;
}

Poly Poly::compose(const Poly& g) const {
    Poly acc(*f_);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * g + constant(*f_, c_[i]);
    return acc;
}

Poly Poly::map(const FieldEmbedding& e) const {
    std::vector<Elt> v(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] = e(c_[i]);
    return Poly(*e.target(), std::move(v));
}

Poly Poly::frobenius_coeffs(unsigned k) const {
    Poly r = *this;
    for (auto& c : r.c_) c = f_->frobenius(c, k);
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (!f_) f_ = o.f_;
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = f_->add(c_[i], o.c_[i]);
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (!f_) f_ = o.f_;
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = f_->sub(c_[i], o.c_[i]);
    trim();
    return *this;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& c : r.c_) c = f_->neg(c);
    return r;
}

Poly operator*(const Poly& a, const Poly& b) {
    const GF* f = a.f_ ? a.f_ : b.f_;
    if (a.is_zero() || b.is_zero()) return Poly(*f);
    std::size_t n = a.c_.size() + b.c_.size() - 1;
    if (f->is_prime_field()) {
        const std::uint64_t p = f->characteristic();
        std::vector<std::uint64_t> acc(n, 0);
        // products < 2^44, so reducing every 2^18 terms keeps the sum safe
        std::size_t count = 0;
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            std::uint64_t ai = a.c_[i];
            if (ai == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) acc[i + j] += ai * b.c_[j];
            if (++count == (1u << 18)) {
                for (auto& x : acc) x %= p;
                count = 0;
            }
        }
        std::vector<Elt> out(n);
        for (std::size_t k = 0; k < n; ++k) out[k] = static_cast<Elt>(acc[k] % p);
        return Poly(*f, std::move(out));
    }
    std::vector<Elt> out(n, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        Elt ai = a.c_[i];
        if (ai == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] = f->add(out[i + j], f->mul(ai, b.c_[j]));
    }
    return Poly(*f, std::move(out));
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
    const GF& f = *b.f_;
    if (a.degree() < b.degree()) {
        q = Poly(f);
        r = a;
        if (!r.f_) r.f_ = &f;
        return;
    }
    std::vector<Elt> rem = a.c_;
    std::size_t db = b.c_.size() - 1;
    std::vector<Elt> quo(rem.size() - db, 0);
    Elt li = f.inv(b.lead());
    for (std::size_t k = rem.size(); k-- > db;) {
        Elt c = rem[k];
        if (c == 0) continue;
        c = f.mul(c, li);
        quo[k - db] = c;
        Elt nc = f.neg(c);
        for (std::size_t i = 0; i <= db; ++i) rem[k - db + i] = f.add(rem[k - db + i], f.mul(nc, b.c_[i]));
    }
    rem.resize(db);
    q = Poly(f, std::move(quo));
    r = Poly(f, std::move(rem));
}

Poly operator/(const Poly& a, const Poly& b) {
    Poly q, r;
    Poly::divmod(a, b, q, r);
    return q;
}

Poly operator%(const Poly& a, const Poly& b) {
    Poly q, r;
    Poly::divmod(a, b, q, r);
    return r;
}

std::string Poly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        std::string cs = f_->to_string(c_[i]);
        bool compound = cs.find('+') != std::string::npos;
        if (!out.empty()) out += "+";
        std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
        if (i == 0) {
            out += compound ? "(" + cs + ")" : cs;
        } else {
            if (c_[i] != 1) out += (compound ? "(" + cs + ")" : cs) + "*";
            out += mono;
        }
    }
    return out;
}

bool poly_less(const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (std::size_t i = a.coeffs().size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

Poly pow(const Poly& a, std::uint64_t e) {
    Poly r = Poly::constant(a.field(), 1), b = a;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

Poly pow_mod(const Poly& a, const BigInt& e, const Poly& m) {
    if (e < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent in pow_mod");
    Poly r = Poly::constant(m.field(), 1) % m;
    Poly b = a % m;
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        r = (r * r) % m;
        if (mpz_tstbit(e.get_mpz_t(), i)) r = (r * b) % m;
    }
    return r;
}

Poly pow_mod(const Poly& a, std::uint64_t e, const Poly& m) {
    Poly r = Poly::constant(m.field(), 1) % m;
    Poly b = a % m;
    while (e) {
        if (e & 1) r = (r * b) % m;
        e >>= 1;
        if (e) b = (b * b) % m;
    }
    return r;
}

Poly gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = x % y;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

Poly xgcd(const Poly& a, const Poly& b, Poly& s, Poly& t) {
    const GF& f = a.field_ptr() ? a.field() : b.field();
    Poly r0 = a, r1 = b;
    Poly s0 = Poly::constant(f, 1), s1(f), t0(f), t1 = Poly::constant(f, 1);
    while (!r1.is_zero()) {
        Poly q, r;
        Poly::divmod(r0, r1, q, r);
        r0 = std::move(r1);
        r1 = std::move(r);
        Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) {
        s = s0;
        t = t0;
        return r0;
    }
    Elt li = f.inv(r0.lead());
    s = s0.scale(li);
    t = t0.scale(li);
    return r0.scale(li);
}

namespace {

Poly pth_root(const Poly& f) {
    const GF& F = f.field();
    std::uint32_t p = F.characteristic();
    std::vector<Elt> out(f.coeffs().size() / p + 1, 0);
    for (std::size_t i = 0; i < f.coeffs().size(); i += p) out[i / p] = F.frobenius_inverse(f[i], 1);
    return Poly(F, std::move(out));
}

void sff_rec(const Poly& f, int mult, std::vector<Factor>& out) {
    if (f.degree() <= 0) return;
    const GF& F = f.field();
    Poly c = gcd(f, f.derivative());
    Poly w = f / c;
    int i = 1;
    while (w.degree() > 0) {
        Poly y = gcd(w, c);
        Poly fac = w / y;
        if (fac.degree() > 0) out.push_back({fac.monic(), i * mult});
        w = y;
        c = c / y;
        ++i;
    }
    if (c.degree() > 0) sff_rec(pth_root(c.monic()), mult * static_cast<int>(F.characteristic()), out);
}

std::vector<Factor> ddf(const Poly& f) {
    std::vector<Factor> out;
    const GF& F = f.field();
    Poly rest = f;
    Poly x = Poly::x(F);
    Poly h = x % rest;
    for (int d = 1; 2 * d <= rest.degree(); ++d) {
        h = pow_mod(h, F.size(), rest);
        Poly g = gcd(h - x, rest);
        if (g.degree() > 0) {
            out.push_back({g, d});
            rest = rest / g;
            h = h % rest;
        }
    }
    if (rest.degree() > 0) out.push_back({rest.monic(), rest.degree()});
    return out;
}

Poly random_poly(const GF& F, int deg_below, Rng& rng) {
    std::uniform_int_distribution<std::uint64_t> dist(0, F.size() - 1);
    std::vector<Elt> v(static_cast<std::size_t>(deg_below));
    for (auto& c : v) c = static_cast<Elt>(dist(rng));
    return Poly(F, std::move(v));
}

void edf(const Poly& g, int d, Rng& rng, std::vector<Poly>& out) {
    if (g.degree() == d) {
        out.push_back(g);
        return;
    }
    const GF& F = g.field();
    std::uint32_t p = F.characteristic();
    for (;;) {
        Poly a = random_poly(F, g.degree(), rng);
        if (a.degree() < 1) continue;
        Poly b;
        if (p == 2) {
            // trace map a + a^2 + ... + a^(2^(k d - 1))
            unsigned steps = F.degree() * static_cast<unsigned>(d);
            Poly t = a % g, acc = t;
            for (unsigned i = 1; i < steps; ++i) {
                t = (t * t) % g;
                acc += t;
            }
            b = acc;
        } else {
            BigInt e = (ipow(F.size_big(), static_cast<unsigned long>(d)) - 1) / 2;
            b = pow_mod(a, e, g) - Poly::constant(F, 1);
        }
        Poly h = gcd(b, g);
        if (h.degree() > 0 && h.degree() < g.degree()) {
            edf(h, d, rng, out);
            edf(g / h, d, rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<Factor> squarefree_factor(const Poly& f) {
    if (f.is_zero()) throw Error(ErrorKind::InvalidArgument, "squarefree factorization of zero");
    std::vector<Factor> out;
    sff_rec(f.monic(), 1, out);
    return out;
}

std::vector<Factor> factor(const Poly& f, Rng& rng) {
    if (f.is_zero()) throw Error(ErrorKind::InvalidArgument, "factorization of zero");
    std::vector<Factor> out;
    for (const auto& sf : squarefree_factor(f)) {
        for (const auto& dd : ddf(sf.poly)) {
            std::vector<Poly> pieces;
            edf(dd.poly, dd.mult, rng, pieces);
            for (auto& pc : pieces) out.push_back({pc.monic(), sf.mult});
        }
    }
    std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) { return poly_less(a.poly, b.poly); });
    // merge equal factors (possible when squarefree parts share nothing, but be safe)
    std::vector<Factor> merged;
    for (auto& fc : out) {
        if (!merged.empty() && merged.back().poly == fc.poly) merged.back().mult += fc.mult;
        else merged.push_back(fc);
    }
    return merged;
}

std::vector<Factor> factor(const Poly& f) {
    Rng rng(0x5eed);
    return factor(f, rng);
}

bool is_irreducible(const Poly& f) {
    int n = f.degree();
    if (n < 1) return false;
    if (n == 1) return true;
    const GF& F = f.field();
    Poly m = f.monic();
    Poly x = Poly::x(F);
    std::vector<int> primes;
    int t = n;
    for (int d = 2; d * d <= t; ++d)
        if (t % d == 0) {
            primes.push_back(d);
            while (t % d == 0) t /= d;
        }
    if (t > 1) primes.push_back(t);
    for (int r : primes) {
        Poly h = x;
        for (int i = 0; i < n / r; ++i) h = pow_mod(h, F.size(), m);
        if (gcd(h - x, m).degree() != 0) return false;
    }
    Poly h = x;
    for (int i = 0; i < n; ++i) h = pow_mod(h, F.size(), m);
    return h == x % m;
}

std::vector<Elt> roots(const Poly& f) {
    if (f.is_zero()) throw Error(ErrorKind::InvalidArgument, "roots of zero polynomial");
    std::vector<Elt> out;
    if (f.degree() < 1) return out;
    const GF& F = f.field();
    Poly m = f.monic();
    Poly x = Poly::x(F);
    Poly g = gcd(pow_mod(x, F.size(), m) - x, m);
    if (g.degree() < 1) return out;
    Rng rng(0x5eed);
    std::vector<Poly> lin;
    edf(g, 1, rng, lin);
    for (auto& l : lin) out.push_back(F.neg(l.monic()[0]));
    std::sort(out.begin(), out.end());
    return out;
}

bool poly_sqrt(const Poly& f, Poly& root) {
    const GF& F = f.field();
    if (f.is_zero()) {
        root = f;
        return true;
    }
    if (f.degree() % 2) return false;
    Elt lr;
    if (!F.sqrt(f.lead(), lr)) return false;
    if (F.characteristic() != 2) {
        // match coefficients from the top, then verify
        const int m = f.degree() / 2;
        std::vector<Elt> s(static_cast<std::size_t>(m) + 1, 0);
        s[static_cast<std::size_t>(m)] = lr;
        const Elt inv2lead = F.inv(F.add(lr, lr));
        for (int k = 1; k <= m; ++k) {
            Elt acc = f[static_cast<std::size_t>(2 * m - k)];
            for (int i = m - k + 1; i <= m; ++i) {
                int j = 2 * m - k - i;
                if (j > m - k && j <= m) acc = F.sub(acc, F.mul(s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(j)]));
            }
            s[static_cast<std::size_t>(m - k)] = F.mul(acc, inv2lead);
        }
        Poly r(F, s);
        if (!(r * r == f)) return false;
        root = r;
        return true;
    }
    Poly acc = Poly::constant(F, lr);
    for (const auto& fc : squarefree_factor(f)) {
        if (fc.mult % 2) return false;
        acc = acc * pow(fc.poly, static_cast<std::uint64_t>(fc.mult / 2));
    }
    root = acc;
    return true;
}

}  // namespace fheight
