#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <sstream>

#include "fheight/elliptic.hpp"
#include "fheight/error.hpp"

namespace fheight {

namespace {

// All polynomials of degree <= d (monic: exactly d, leading 1).
std::vector<Poly> enumerate_polys(const GF& F, int d, bool monic) {
    std::vector<Poly> out;
    const std::uint64_t q = F.size();
    std::uint64_t total = 1;
    int free = monic ? d : d + 1;
    for (int i = 0; i < free; ++i) total *= q;
    out.reserve(total);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::vector<Elt> c(static_cast<std::size_t>(d) + 1, 0);
        std::uint64_t r = idx;
        for (int i = 0; i < free; ++i) {
            c[static_cast<std::size_t>(i)] = static_cast<Elt>(r % q);
            r /= q;
        }
        if (monic) c[static_cast<std::size_t>(d)] = 1;
        out.emplace_back(F, std::move(c));
    }
    return out;
}

bool point_less(const ECPoint& a, const ECPoint& b) {
    if (a.inf != b.inf) return a.inf;
    if (a.inf) return false;
    if (a.x.height() != b.x.height()) return a.x.height() < b.x.height();
    if (a.x != b.x) return ratfunc_less(a.x, b.x);
    return ratfunc_less(a.y, b.y);
}

// Points x = n/e^2, y = Y/e^3 on the working model for one denominator e.
std::vector<ECPoint> search_denominator(const ECurve& E, const Poly& e, long bound, const std::vector<Poly>& nums) {
    std::vector<ECPoint> out;
    Poly e2 = e * e, e4 = e2 * e2, e6 = e4 * e2, e3 = e2 * e;
    Poly Be4 = E.BW() * e4, Ce6 = E.CW() * e6;
    RatFunc xden(e2), yden(e3);
    for (const Poly& n : nums) {
        if (std::max(n.degree(), 2 * e.degree()) > bound) continue;
        if (n.is_zero() ? e.degree() > 0 : !gcd(n, e).is_one()) continue;
        Poly N = n * n * n + Be4 * n + Ce6;
        Poly Y;
        if (!poly_sqrt(N, Y)) continue;
        RatFunc x = RatFunc(n, e2);
        if (Y.is_zero()) {
            out.push_back(ECPoint::affine(x, RatFunc(E.field())));
            continue;
        }
        RatFunc y = RatFunc(Y, e3);
        out.push_back(ECPoint::affine(x, y));
        out.push_back(ECPoint::affine(x, -y));
    }
    return out;
}

bool less_big(const BigInt& a, const BigInt& b) { return a < b; }

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Inconclusive: return "Inconclusive";
    case Verdict::NotApplicable: return "NotApplicable";
    }
    return "?";
}

std::vector<ECPoint> point_search(const ECurve& E, long bound, bool parallel) {
    if (bound < 0) return {};
    const GF& F = E.field();
    std::vector<Poly> nums = enumerate_polys(F, static_cast<int>(bound), false);
    std::vector<Poly> dens;
    for (int d = 0; 2 * d <= bound; ++d) {
        auto m = enumerate_polys(F, d, true);
        dens.insert(dens.end(), m.begin(), m.end());
    }
    std::vector<ECPoint> W;
    if (parallel && dens.size() > 1) {
        std::vector<std::future<std::vector<ECPoint>>> jobs;
        for (const Poly& e : dens) jobs.push_back(std::async(std::launch::async, [&, e] { return search_denominator(E, e, bound, nums); }));
        for (auto& j : jobs) {
            auto part = j.get();
            W.insert(W.end(), part.begin(), part.end());
        }
    } else {
        for (const Poly& e : dens) {
            auto part = search_denominator(E, e, bound, nums);
            W.insert(W.end(), part.begin(), part.end());
        }
    }
    std::sort(W.begin(), W.end(), point_less);
    std::vector<ECPoint> out;
    out.reserve(W.size());
    for (const auto& P : W) out.push_back(E.from_working(P));
    return out;
}

std::vector<TorsionPoint> torsion_group(const ECurve& E) {
    if (E.isotrivial()) throw Error(ErrorKind::IsotrivialCurve, "torsion census needs non-constant j");
    std::vector<TorsionPoint> out{{ECPoint::identity(), 1}};
    for (const auto& P : point_search(E, search_radius(E, 0)))
        if (long ord = torsion_order(E, P)) out.push_back({P, ord});
    return out;
}

Census small_height_census(const ECurve& E, bool semistable_mode, const BigRational& width) {
    CurveProfile pr = curve_profile(E);
    Census c;
    c.threshold = make_rational(semistable_mode ? pr.d_EK : pr.deg_j, 96);
    c.radius = search_radius(E, c.threshold);
    c.below.push_back({ECPoint::identity(), HeightInterval{0, 0, 0, 1}});
    auto pts = point_search(E, c.radius);
    c.searched = static_cast<long>(pts.size());
    for (const auto& P : pts) {
        BigRational w = width;
        HeightInterval h = canonical_height(E, P, w);
        // tighten until the threshold is separated or the doubling cap is hit
        while (h.lo < c.threshold && h.hi >= c.threshold && h.torsion_order == 0) {
            w /= 64;
            try {
                h = canonical_height(E, P, w);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::WidthNotReached) throw;
                break;
            }
        }
        if (h.hi < c.threshold)
            c.below.push_back({P, h});
        else if (h.lo < c.threshold)
            c.borderline.push_back({P, h});
    }
    c.count = static_cast<long>(c.below.size());
    return c;
}

std::vector<LangRow> lehmer_lang_check(const ECurve& E, const std::vector<ECPoint>& points, int cap) {
    CurveProfile pr = curve_profile(E);
    BigRational bound = make_rational(pr.semistable ? pr.d_EK : pr.deg_j, 60000);
    std::vector<LangRow> rows;
    for (const auto& P : points) {
        if (P.inf || torsion_order(E, P)) continue;
        LangRow r;
        r.P = P;
        r.bound = bound;
        BigRational w = bound / 4;
        for (;;) {
            try {
                r.h = canonical_height(E, P, w, cap);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::WidthNotReached) throw;
                break;
            }
            if (r.h.lo >= bound) {
                r.verdict = Verdict::Pass;
                break;
            }
            if (r.h.hi < bound) {
                r.verdict = Verdict::Fail;
                break;
            }
            w /= 64;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

bool in_R_S(const RatFunc& a, const std::vector<Place>& S) {
    for (const auto& w : poles(a))
        if (std::find(S.begin(), S.end(), w) == S.end()) return false;
    return true;
}

SMinimal s_minimal_model(const ECurve& E, const std::vector<Place>& S) {
    if (S.empty()) throw Error(ErrorKind::InvalidArgument, "S must be nonempty");
    const GF& f = E.field();
    Place inf = Place::infinite(f);
    bool inf_in_S = std::find(S.begin(), S.end(), inf) != S.end();
    Poly dW = E.discriminant_W();
    std::vector<Place> cand;
    for (const auto& w : S)
        if (!w.is_infinite()) cand = merge_places(cand, {w});
    cand = merge_places(cand, prime_divisors(dW));

    // The working model is integral and minimal at every finite place, so outside S only k <= 0 keeps it integral.
    std::vector<long> lo, hi;
    for (const auto& w : cand) {
        bool inS = std::find(S.begin(), S.end(), w) != S.end();
        long vd = valuation(w, dW);
        lo.push_back(-2);
        hi.push_back(inS ? (vd + 11) / 12 + 1 : 0);
    }
    long vinfB = valuation(inf, E.BW()), vinfC = valuation(inf, E.CW()), vinfD = valuation(inf, dW);
    auto cost = [&](const std::vector<long>& k, long& kinf) -> long {
        long s = 0, degsum = 0;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            long d = cand[i].degree();
            s += d * std::max(0L, valuation(cand[i], dW) - 12 * k[i]);
            degsum += d * k[i];
        }
        kinf = -degsum;
        if (!inf_in_S) {
            if (vinfB != kInfVal && vinfB - 4 * kinf < 0) return -1;
            if (vinfC != kInfVal && vinfC - 6 * kinf < 0) return -1;
        }
        return s + std::max(0L, vinfD - 12 * kinf);
    };
    std::vector<long> k(cand.size()), best;
    long best_cost = -1, best_l1 = 0;
    std::size_t combos = 1;
    for (std::size_t i = 0; i < cand.size(); ++i) combos *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
    if (combos > 2000000) throw Error(ErrorKind::InvalidArgument, "S-minimal search space too large");
    for (std::size_t i = 0; i < cand.size(); ++i) k[i] = lo[i];
    for (;;) {
        long kinf = 0;
        long c = cost(k, kinf);
        if (c >= 0) {
            long l1 = 0;
            for (long v : k) l1 += std::abs(v);
            if (best_cost < 0 || c < best_cost || (c == best_cost && l1 < best_l1)) {
                best_cost = c;
                best_l1 = l1;
                best = k;
            }
        }
        std::size_t i = 0;
        while (i < cand.size() && k[i] == hi[i]) {
            k[i] = lo[i];
            ++i;
        }
        if (i == cand.size()) break;
        ++k[i];
    }
    if (best_cost < 0) throw Error(ErrorKind::InvalidArgument, "no S-integral model found");
    Poly vn = Poly::constant(f, 1), vd = Poly::constant(f, 1);
    for (std::size_t i = 0; i < cand.size(); ++i) {
        if (best[i] > 0) vn = vn * pow(cand[i].pi(), static_cast<std::uint64_t>(best[i]));
        if (best[i] < 0) vd = vd * pow(cand[i].pi(), static_cast<std::uint64_t>(-best[i]));
    }
    RatFunc v(vn, vd);
    ECurve ES(RatFunc(E.BW()) * v.pow(-4), RatFunc(E.CW()) * v.pow(-6));
    return SMinimal{ES, E.u() * v, best, cand};
}

long gram_rank(const ECurve& E, const std::vector<ECPoint>& points) {
    std::vector<ECPoint> P;
    std::vector<BigRational> h;
    for (const auto& p : points) {
        if (p.inf || torsion_order(E, p)) continue;
        P.push_back(p);
        h.push_back(exact_height(E, p, false));
    }
    const std::size_t n = P.size();
    std::vector<std::vector<BigRational>> G(n, std::vector<BigRational>(n));
    for (std::size_t i = 0; i < n; ++i) {
        G[i][i] = h[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            G[i][j] = (exact_height(E, ec_add(E, P[i], P[j]), false) - h[i] - h[j]) / 2;
            G[j][i] = G[i][j];
        }
    }
    long rank = 0;
    for (std::size_t col = 0; col < n && static_cast<std::size_t>(rank) < n; ++col) {
        std::size_t r = static_cast<std::size_t>(rank);
        std::size_t piv = r;
        while (piv < n && G[piv][col] == 0) ++piv;
        if (piv == n) continue;
        std::swap(G[piv], G[r]);
        for (std::size_t i = r + 1; i < n; ++i) {
            if (G[i][col] == 0) continue;
            BigRational m = G[i][col] / G[r][col];
            for (std::size_t j = col; j < n; ++j) G[i][j] -= m * G[r][j];
        }
        ++rank;
    }
    return rank;
}

IntegralReport integral_points_census(const ECurve& E, const std::vector<Place>& S, std::optional<RankInfo> rank_info,
                                      long radius_cap) {
    IntegralReport rep{s_minimal_model(E, S), {}, false, 0, 0, {}, 0, 0, 0, Verdict::Inconclusive, std::nullopt, "", Verdict::NotApplicable, "",
                       Verdict::NotApplicable};
    const ECurve& ES = rep.model.E;
    rep.profile = curve_profile(ES);
    const long nS = static_cast<long>(S.size());
    rep.epsilon_bound = BigRational(rep.profile.p_e * (4 * nS + 5 * rep.profile.d_EK));
    rep.radius_needed = search_radius(ES, rep.epsilon_bound);
    rep.radius_searched = std::min(rep.radius_needed, radius_cap);
    rep.complete = rep.radius_needed <= radius_cap;

    auto found = point_search(ES, rep.radius_searched);
    bool have_delta = false;
    for (const auto& P : found) {
        BigRational h = exact_height(ES, P, false);
        if (in_R_S(P.x, S) && in_R_S(P.y, S)) {
            rep.points.push_back(P);
            if (h > rep.epsilon_observed) rep.epsilon_observed = h;
        }
        if (h > 0 && (!have_delta || h < rep.delta)) {
            rep.delta = h;
            have_delta = true;
        }
    }
    rep.epsilon_verdict = rep.epsilon_observed <= rep.epsilon_bound ? Verdict::Pass : Verdict::Fail;
    rep.rank = rank_info ? rank_info : std::optional<RankInfo>(RankInfo{gram_rank(ES, found), true});

    const long r = rep.rank->rank;
    const long pe = rep.profile.p_e;
    const BigInt count = BigInt(static_cast<long>(rep.points.size()));
    std::ostringstream os;
    os << "24*(2299*sqrt(" << pe * nS << "))^" << r << " = " << std::scientific
       << 24.0 * std::pow(2299.0 * std::sqrt(static_cast<double>(pe * nS)), static_cast<double>(r));
    rep.bound_semistable = os.str();
    if (rep.profile.semistable) {
        // count <= 24 (2299 sqrt(pe #S))^r  <=>  count^2 <= 576 (2299^2 pe #S)^r
        BigInt rhs = 576 * ipow(BigInt(2299) * 2299 * pe * nS, static_cast<unsigned long>(r));
        bool ok = !less_big(rhs, count * count);
        rep.verdict_semistable = ok ? Verdict::Pass : (rep.rank->lower_bound ? Verdict::Inconclusive : Verdict::Fail);
    }
    // The general-case bounds carry a factor g (or sqrt g); with g = 0 they do not apply.
    rep.bound_general = "24*(13788*sqrt(g*" + std::to_string(pe * nS) + "))^" + std::to_string(r) + " with g = 0";
    rep.verdict_general = Verdict::NotApplicable;
    return rep;
}

SzpiroRow szpiro_check(const ECurve& E) {
    CurveProfile pr = curve_profile(E);
    SzpiroRow r;
    r.lhs = pr.d_EK;
    r.rhs = 6 * pr.p_e * (2 * pr.genus - 2 + pr.f_EK);
    r.szpiro = r.lhs <= r.rhs ? Verdict::Pass : Verdict::Fail;
    if (pr.semistable)
        r.semistable_identity = pr.deg_j == pr.d_EK ? Verdict::Pass : Verdict::Fail;
    else
        r.semistable_identity = pr.deg_j < pr.d_EK ? Verdict::Pass : Verdict::Fail;
    r.conductor_bound = pr.f_EK < 2 * pr.deg_s ? Verdict::Pass : Verdict::Fail;
    return r;
}

GeneratedCurve generate_curve(const GF& F, Rng& rng, bool semistable) {
    std::uniform_int_distribution<std::uint64_t> coef(0, F.size() - 1);
    auto rpoly = [&](int deg, bool exact) {
        std::vector<Elt> c(static_cast<std::size_t>(deg) + 1);
        for (auto& x : c) x = static_cast<Elt>(coef(rng));
        if (exact)
            while (c.back() == 0) c.back() = static_cast<Elt>(coef(rng));
        return Poly(F, c);
    };
    for (;;) {
        // B and the point are drawn; C is solved so the point lies on the curve.
        Poly B = semistable ? rpoly(4, true) : rpoly(2, false);
        Poly x0 = rpoly(1, false), y0 = semistable ? rpoly(3, false) : rpoly(1, false);
        if (y0.is_zero()) continue;
        Poly C = y0 * y0 - x0 * x0 * x0 - B * x0;
        try {
            ECurve E{RatFunc(B), RatFunc(C)};
            if (E.isotrivial() || E.semistable() != semistable) continue;
            return GeneratedCurve{E, ECPoint::affine(RatFunc(x0), RatFunc(y0))};
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::InvalidArgument) throw;
        }
    }
}

}  // namespace fheight
