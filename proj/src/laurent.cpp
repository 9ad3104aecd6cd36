#include "fheight/laurent.hpp"

#include <algorithm>

#include "fheight/error.hpp"

namespace fheight {

long sat_add(long a, long b) noexcept {
    if (a == kExact || b == kExact) return kExact;
    return a + b;
}

namespace {

long sat_mul(long a, long m) noexcept { return a == kExact ? kExact : a * m; }

}  // namespace

Laurent Laurent::monomial(const GF& field, Elt coeff, long exp) {
    Laurent r(field);
    if (coeff != 0) {
        r.val = exp;
        r.c = {coeff};
    }
    return r;
}

Laurent Laurent::unknown(const GF& field, long p) {
    Laurent r(field);
    r.prec = p;
    r.val = p;
    return r;
}

Laurent Laurent::from_coeffs(const GF& field, long v, std::vector<Elt> coeffs, long p) {
    Laurent r(field);
    r.val = v;
    r.c = std::move(coeffs);
    r.prec = p;
    r.normalize();
    return r;
}

long Laurent::valuation() const {
    if (!c.empty()) return val;
    if (prec == kExact) return LONG_MAX;
    throw PrecisionNeeded{prec};
}

Elt Laurent::coeff(long k) const noexcept {
    if (k < val) return 0;
    auto i = static_cast<std::size_t>(k - val);
    return i < c.size() ? c[i] : 0;
}

long Laurent::relative_precision() const noexcept {
    if (prec == kExact) return kExact;
    return prec - valuation_bound();
}

void Laurent::normalize() {
    std::size_t lead = 0;
    while (lead < c.size() && c[lead] == 0) ++lead;
    if (lead) {
        c.erase(c.begin(), c.begin() + static_cast<long>(lead));
        val += static_cast<long>(lead);
    }
    if (prec != kExact) {
        if (val >= prec) {
            c.clear();
        } else if (static_cast<long>(c.size()) > prec - val) {
            c.resize(static_cast<std::size_t>(prec - val));
        }
    }
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.empty()) val = prec == kExact ? 0 : prec;
}

Laurent Laurent::truncated(long rel) const {
    if (rel == kExact) return *this;
    return cut(sat_add(valuation_bound(), rel));
}

Laurent Laurent::cut(long abs_prec) const {
    if (abs_prec >= prec) return *this;
    Laurent r = *this;
    r.prec = abs_prec;
    r.normalize();
    return r;
}

Laurent operator+(const Laurent& a, const Laurent& b) {
    const GF& F = a.f ? *a.f : *b.f;
    long prec = std::min(a.prec, b.prec);
    if (a.c.empty()) return b.cut(prec);
    if (b.c.empty()) return a.cut(prec);
    long lo = std::min(a.val, b.val);
    long hi = std::max(a.val + static_cast<long>(a.c.size()), b.val + static_cast<long>(b.c.size()));
    if (prec != kExact) hi = std::min(hi, prec);
    Laurent r(F);
    r.prec = prec;
    r.val = lo;
    if (hi <= lo) {
        r.normalize();
        return r;
    }
    r.c.assign(static_cast<std::size_t>(hi - lo), 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        long k = a.val + static_cast<long>(i) - lo;
        if (k < hi - lo) r.c[static_cast<std::size_t>(k)] = a.c[i];
    }
    for (std::size_t i = 0; i < b.c.size(); ++i) {
        long k = b.val + static_cast<long>(i) - lo;
        if (k < hi - lo) r.c[static_cast<std::size_t>(k)] = F.add(r.c[static_cast<std::size_t>(k)], b.c[i]);
    }
    r.normalize();
    return r;
}

Laurent operator-(const Laurent& a) {
    Laurent r = a;
    for (auto& x : r.c) x = a.f->neg(x);
    return r;
}

Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }

Laurent operator*(const Laurent& a, const Laurent& b) {
    const GF& F = a.f ? *a.f : *b.f;
    if (a.is_exact_zero() || b.is_exact_zero()) return Laurent(F);
    long va = a.valuation_bound(), vb = b.valuation_bound();
    long prec = std::min(sat_add(va, b.prec), sat_add(vb, a.prec));
    if (a.c.empty() || b.c.empty()) return Laurent::unknown(F, prec);
    Laurent r(F);
    r.prec = prec;
    r.val = a.val + b.val;
    long n = static_cast<long>(a.c.size() + b.c.size() - 1);
    if (prec != kExact) n = std::min(n, prec - r.val);
    if (n <= 0) {
        r.normalize();
        return r;
    }
    r.c.assign(static_cast<std::size_t>(n), 0);
    if (F.is_prime_field()) {
        const std::uint64_t p = F.characteristic();
        std::vector<std::uint64_t> acc(static_cast<std::size_t>(n), 0);
        std::size_t rows = 0;
        for (std::size_t i = 0; i < a.c.size() && static_cast<long>(i) < n; ++i) {
            std::uint64_t ai = a.c[i];
            if (!ai) continue;
            std::size_t jmax = std::min(b.c.size(), static_cast<std::size_t>(n) - i);
            for (std::size_t j = 0; j < jmax; ++j) acc[i + j] += ai * b.c[j];
            if (++rows == (1u << 18)) {
                for (auto& x : acc) x %= p;
                rows = 0;
            }
        }
        for (long k = 0; k < n; ++k) r.c[static_cast<std::size_t>(k)] = static_cast<Elt>(acc[static_cast<std::size_t>(k)] % p);
    } else {
        for (std::size_t i = 0; i < a.c.size() && static_cast<long>(i) < n; ++i) {
            Elt ai = a.c[i];
            if (!ai) continue;
            std::size_t jmax = std::min(b.c.size(), static_cast<std::size_t>(n) - i);
            for (std::size_t j = 0; j < jmax; ++j) r.c[i + j] = F.add(r.c[i + j], F.mul(ai, b.c[j]));
        }
    }
    r.normalize();
    return r;
}

Laurent scale(const Laurent& a, Elt s) {
    if (s == 0) return a.is_exact() ? Laurent(*a.f) : Laurent::unknown(*a.f, a.prec);
    Laurent r = a;
    for (auto& x : r.c) x = a.f->mul(x, s);
    return r;
}

Laurent shift(const Laurent& a, long k) {
    Laurent r = a;
    if (!r.c.empty()) r.val += k;
    r.prec = sat_add(r.prec, k);
    if (r.c.empty() && r.prec != kExact) r.val = r.prec;
    return r;
}

Laurent inverse(const Laurent& a, long rel) {
    if (a.is_exact_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero series");
    long v = a.valuation();
    const GF& F = *a.f;
    if (a.is_exact() && a.c.size() == 1) return Laurent::monomial(F, F.inv(a.c[0]), -v);
    long r = a.is_exact() ? rel : std::min(a.prec - v, rel);
    if (r < 1) r = 1;
    std::vector<Elt> b(static_cast<std::size_t>(r), 0);
    Elt b0 = F.inv(a.c[0]);
    b[0] = b0;
    Elt nb0 = F.neg(b0);
    for (long k = 1; k < r; ++k) {
        Elt s = 0;
        long imax = std::min<long>(k, static_cast<long>(a.c.size()) - 1);
        for (long i = 1; i <= imax; ++i) s = F.add(s, F.mul(a.c[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(k - i)]));
        b[static_cast<std::size_t>(k)] = F.mul(nb0, s);
    }
    return Laurent::from_coeffs(F, -v, std::move(b), -v + r);
}

Laurent divide(const Laurent& a, const Laurent& b, long rel) { return (a * inverse(b, rel)).truncated(rel); }

Laurent power(const Laurent& a, long e, long rel) {
    if (e < 0) return power(inverse(a, rel), -e, rel);
    Laurent r = Laurent::constant(*a.f, 1), base = a;
    while (e) {
        if (e & 1) r = (r * base).truncated(rel);
        e >>= 1;
        if (e) base = (base * base).truncated(rel);
    }
    return r;
}

Laurent frobenius_power(const Laurent& a, unsigned k) {
    if (k == 0) return a;
    const GF& F = *a.f;
    long m = 1;
    for (unsigned i = 0; i < k; ++i) m *= F.characteristic();
    Laurent r(F);
    r.prec = sat_mul(a.prec, m);
    if (a.c.empty()) {
        r.val = r.prec == kExact ? 0 : r.prec;
        return r;
    }
    r.val = a.val * m;
    r.c.assign((a.c.size() - 1) * static_cast<std::size_t>(m) + 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i * static_cast<std::size_t>(m)] = F.frobenius(a.c[i], k);
    r.normalize();
    return r;
}

Laurent inseparable_root(const Laurent& a, unsigned k) {
    Laurent r = a;
    for (auto& x : r.c) x = a.f->frobenius_inverse(x, k);
    return r;
}

Laurent substitute(const Laurent& a, const FieldEmbedding& emb, Elt C, long E) {
    const GF& G = *emb.target();
    Laurent r(G);
    r.prec = sat_mul(a.prec, E);
    if (a.c.empty()) {
        r.val = r.prec == kExact ? 0 : r.prec;
        return r;
    }
    r.val = a.val * E;
    r.c.assign((a.c.size() - 1) * static_cast<std::size_t>(E) + 1, 0);
    Elt cp = G.pow(C, BigInt(a.val));
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        r.c[i * static_cast<std::size_t>(E)] = G.mul(emb(a.c[i]), cp);
        cp = G.mul(cp, C);
    }
    r.normalize();
    return r;
}

Laurent horner(const std::vector<Laurent>& coeffs, const Laurent& x, long rel) {
    if (coeffs.empty()) return Laurent(*x.f);
    Laurent acc = coeffs.back();
    for (std::size_t i = coeffs.size() - 1; i-- > 0;) acc = ((acc * x).truncated(rel) + coeffs[i]).truncated(rel);
    return acc;
}

}  // namespace fheight
