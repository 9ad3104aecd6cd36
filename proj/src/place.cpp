#include "fheight/place.hpp"

#include <algorithm>

#include "fheight/error.hpp"

namespace fheight {

Place Place::infinite(const GF& f) {
    Place p;
    p.f_ = &f;
    p.inf_ = true;
    return p;
}

Place Place::finite(const Poly& pi) {
    if (!pi.is_monic() || !is_irreducible(pi)) throw Error(ErrorKind::NotIrreducible, pi.to_string() + " is not monic irreducible");
    Place p;
    p.f_ = &pi.field();
    p.inf_ = false;
    p.pi_ = pi;
    return p;
}

bool operator<(const Place& a, const Place& b) {
    if (a.inf_ != b.inf_) return a.inf_;
    if (a.inf_) return false;
    return poly_less(a.pi_, b.pi_);
}

long valuation(const Place& w, const Poly& a) {
    if (a.is_zero()) return kInfVal;
    if (w.is_infinite()) return -a.degree();
    long k = 0;
    Poly cur = a;
    for (;;) {
        Poly q, r;
        Poly::divmod(cur, w.pi(), q, r);
        if (!r.is_zero()) return k;
        cur = std::move(q);
        ++k;
    }
}

long valuation(const Place& w, const RatFunc& a) {
    if (a.is_zero()) return kInfVal;
    return valuation(w, a.num()) - valuation(w, a.den());
}

BigRational height_K(const RatFunc& a) { return BigRational(a.height()); }

BigRational height_K_by_places(const RatFunc& a) {
    if (a.is_zero()) return 0;
    long s = 0;
    for (const auto& w : poles(a)) s += static_cast<long>(w.degree()) * -valuation(w, a);
    return BigRational(s);
}

std::vector<Place> prime_divisors(const Poly& a) {
    std::vector<Place> out;
    if (a.degree() < 1) return out;
    for (const auto& fc : factor(a)) {
        out.push_back(Place::finite(fc.poly));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Place> merge_places(const std::vector<Place>& a, const std::vector<Place>& b) {
    std::vector<Place> out = a;
    for (const auto& p : b)
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Place> support(const RatFunc& a) {
    std::vector<Place> out{Place::infinite(a.field())};
    if (a.is_zero()) return out;
    out = merge_places(out, prime_divisors(a.num()));
    return merge_places(out, prime_divisors(a.den()));
}

std::vector<Place> poles(const RatFunc& a) {
    std::vector<Place> out;
    if (a.is_zero()) return out;
    if (valuation(Place::infinite(a.field()), a) < 0) out.push_back(Place::infinite(a.field()));
    return merge_places(out, prime_divisors(a.den()));
}

NewtonPolygon newton_polygon(const std::vector<std::pair<long, long>>& points) {
    std::vector<std::pair<long, long>> pts;
    for (const auto& p : points)
        if (p.second != kInfVal) pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    if (pts.size() < 2) throw Error(ErrorKind::DegeneratePolygon, "need at least two finite points");
    std::vector<std::pair<long, long>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& o = hull[hull.size() - 2];
            const auto& a = hull.back();
            // drop a if it lies on or above the chord o -> p
            __int128 cross = static_cast<__int128>(a.first - o.first) * (p.second - o.second) -
                             static_cast<__int128>(a.second - o.second) * (p.first - o.first);
            if (cross <= 0) hull.pop_back();
            else break;
        }
        if (!hull.empty() && hull.back().first == p.first) continue;
        hull.push_back(p);
    }
    NewtonPolygon np;
    for (std::size_t k = 1; k < hull.size(); ++k) {
        long di = hull[k].first - hull[k - 1].first;
        long dv = hull[k].second - hull[k - 1].second;
        np.segments.push_back({make_rational(dv, di), di, hull[k - 1].first, hull[k - 1].second});
    }
    return np;
}

CompletionK::CompletionK(const Place& w) : w_(w) {
    const GF& F = w.field();
    if (w.is_infinite() || w.degree() == 1) {
        k_ = &F;
        iota_ = FieldEmbedding::identity(&F);
        theta_ = w.is_infinite() ? 0 : F.neg(w.pi()[0]);
        return;
    }
    k_ = &GF::make(F.characteristic(), F.degree() * static_cast<std::uint32_t>(w.degree()));
    iota_ = FieldEmbedding::find(&F, k_);
    auto rs = roots(w.pi().map(iota_));
    if (rs.empty()) throw Error(ErrorKind::InvalidArgument, "no root of " + w.to_string() + " in residue field");
    theta_ = rs.front();
}

Laurent CompletionK::T_series(long rel) const {
    const GF& k = *k_;
    if (w_.is_infinite()) return Laurent::monomial(k, 1, -1);
    if (w_.degree() == 1) return Laurent::from_coeffs(k, 0, {theta_, 1});
    std::lock_guard<std::mutex> lock(mu_);
    auto it = t_cache_.lower_bound(rel);
    if (it != t_cache_.end()) return it->second.cut(rel);
    // Newton iteration for pi(t) = w starting from theta.
    Poly pi = w_.pi().map(iota_);
    Poly dpi = pi.derivative();
    auto eval = [&](const Poly& g, const Laurent& t, long r) {
        std::vector<Laurent> cs;
        for (Elt c : g.coeffs()) cs.push_back(Laurent::constant(k, c));
        return horner(cs, t, r);
    };
    Laurent t = Laurent::from_coeffs(k, 0, {theta_}, 1);
    long have = 1;
    Laurent w = Laurent::monomial(k, 1, 1);
    while (have < rel) {
        long target = std::min(2 * have, rel);
        Laurent tt = Laurent::from_coeffs(k, t.val, t.c, target);
        Laurent num = eval(pi, tt, target) - w;
        Laurent den = eval(dpi, tt, target);
        tt = (tt - divide(num, den, target)).cut(target);
        t = tt;
        have = target;
    }
    t_cache_[rel] = t;
    return t;
}

Laurent CompletionK::unit_series(const Poly& g, long rel) const {
    const GF& k = *k_;
    if (w_.is_infinite()) {
        // g(T) = T^deg * reversed(g)(1/T)
        std::vector<Elt> c(g.coeffs().rbegin(), g.coeffs().rend());
        return Laurent::from_coeffs(k, -g.degree(), std::move(c));
    }
    Poly gm = g.map(iota_);
    Laurent t = T_series(rel);
    std::vector<Laurent> cs;
    for (Elt c : gm.coeffs()) cs.push_back(Laurent::constant(k, c));
    return horner(cs, t, t.is_exact() ? kExact : rel);
}

Laurent CompletionK::series(const Poly& g, long rel) const {
    if (g.is_zero()) return Laurent(*k_);
    if (w_.is_infinite()) return unit_series(g, rel);
    long v = 0;
    Poly cur = g;
    for (;;) {
        Poly q, r;
        Poly::divmod(cur, w_.pi(), q, r);
        if (!r.is_zero()) break;
        cur = std::move(q);
        ++v;
    }
    return shift(unit_series(cur, rel), v);
}

Laurent CompletionK::series(const RatFunc& a, long rel) const {
    if (a.is_zero()) return Laurent(*k_);
    Laurent n = series(a.num(), rel);
    if (a.den().is_one()) return n;
    Laurent d = series(a.den(), rel);
    if (n.is_exact() && d.is_exact() && d.c.size() == 1) return n * inverse(d, rel);
    return divide(n, d, rel);
}

const CompletionK& completion(const Place& w) {
    static std::mutex mu;
    static std::map<std::pair<const GF*, std::vector<Elt>>, std::unique_ptr<CompletionK>> cache;
    std::lock_guard<std::mutex> lock(mu);
    std::vector<Elt> key = w.is_infinite() ? std::vector<Elt>{} : w.pi().coeffs();
    auto k = std::make_pair(&w.field(), key);
    auto it = cache.find(k);
    if (it != cache.end()) return *it->second;
    auto c = std::make_unique<CompletionK>(w);
    const CompletionK& ref = *c;
    cache.emplace(k, std::move(c));
    return ref;
}

}  // namespace fheight
