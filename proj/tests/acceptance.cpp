// Acceptance run: one PASS/FAIL line per criterion.
// Exit status is nonzero on any failure that is not a documented finding (see README).

#include <chrono>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "fheight/drinfeld.hpp"
#include "fheight/elliptic.hpp"
#include "fheight/error.hpp"
#include "fheight/expr.hpp"

using namespace fheight;

namespace {

// Pinned tolerances.
const BigRational kDecompTol = make_rational(1, 1000);   // naive-limit bracket and its convergence test
const BigRational kWidth = make_rational(1, 10000);      // EC height interval width
constexpr double kCarlitzSeconds = 1.0;
constexpr double kLangInconclusiveShare = 0.05;

struct Outcome {
    bool pass = true;
    std::string detail;
    // A failure that is a reproducible property of the mathematics, fully characterized below.
    bool documented = false;
};

RatFunc R(const GF& f, const std::string& s) { return parse_ratfunc(f, s); }

Poly random_poly(const GF& F, Rng& rng, int maxdeg, bool nonzero = false) {
    std::uniform_int_distribution<std::uint64_t> d(0, F.size() - 1);
    std::uniform_int_distribution<int> dg(0, maxdeg);
    for (;;) {
        std::vector<Elt> c(static_cast<std::size_t>(dg(rng)) + 1);
        for (auto& x : c) x = static_cast<Elt>(d(rng));
        Poly p(F, c);
        if (!nonzero || !p.is_zero()) return p;
    }
}

RatFunc random_ratfunc(const GF& F, Rng& rng, int maxdeg) {
    return RatFunc(random_poly(F, rng, maxdeg), random_poly(F, rng, maxdeg, true));
}

BigRational pow_q(const GF& F, long e) { return BigRational(ipow(F.size_big(), static_cast<unsigned long>(e))); }

// phi_T(x) = T x + sum a_i x^(q^i), straight from the definition.
RatFunc apply_T_direct(const GF& F, const std::vector<RatFunc>& a, const RatFunc& x) {
    RatFunc s = RatFunc::T(F) * x, xp = x;
    for (const auto& ai : a) {
        xp = xp.pow(static_cast<long>(F.size()));
        s = s + ai * xp;
    }
    return s;
}

// ---------------------------------------------------------------- 1
Outcome carlitz_exactness() {
    Outcome o;
    std::ostringstream d;
    for (std::uint32_t q : {3u, 5u}) {
        const GF& F = GF::make(q, 1);
        auto t0 = std::chrono::steady_clock::now();
        DrinfeldModule phi = DrinfeldModule::carlitz(F);
        ExtElem one(phi.ext(), RatFunc::constant(F, 1));
        HeightResult h = global_height(phi, one);
        auto est = naive_height_estimate(phi, one, 5);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool ok = h.value == make_rational(1, q) && h.status == HeightStatus::Exact && secs < kCarlitzSeconds;
        // Oracle: deg phi_{T^n}(1) = q^(n-1), by expanding T x + x^q directly.
        RatFunc x = RatFunc::constant(F, 1);
        for (int n = 1; n <= 5; ++n) {
            x = apply_T_direct(F, {RatFunc::constant(F, 1)}, x);
            BigRational oracle = BigRational(x.num().degree()) / pow_q(F, n);
            ok = ok && x.num().degree() == static_cast<long>(std::pow(q, n - 1)) && oracle == make_rational(1, q) &&
                 est[static_cast<std::size_t>(n)] == oracle;
        }
        o.pass = o.pass && ok;
        d << "q=" << q << ": hhat=" << to_fraction_string(h.value) << " " << to_string(h.status) << ", estimates n=1..5 = 1/" << q
          << " (" << static_cast<int>(secs * 1000) << " ms); ";
    }
    o.detail = d.str();
    return o;
}

// ---------------------------------------------------------------- 2, 3
struct SweepCase {
    std::uint32_t q;
    bool carlitz = false;
    std::vector<RatFunc> a;
    std::vector<SweepRow> rows;
};

std::vector<SweepCase>& sweep_corpus() {
    static std::vector<SweepCase> cases = [] {
        std::vector<SweepCase> out;
        Rng rng(20240601);
        for (std::uint32_t q : {2u, 3u, 5u}) {
            const GF& F = GF::make(q, 1);
            std::vector<std::vector<RatFunc>> modules = {{RatFunc::constant(F, 1)}};  // Carlitz first
            for (int r = 1; r <= 2; ++r)
                for (int k = 0; k < 3;) {
                    std::vector<RatFunc> a;
                    for (int i = 1; i <= r; ++i) a.emplace_back(random_poly(F, rng, 2, i == r));
                    if (std::find(modules.begin(), modules.end(), a) != modules.end()) continue;
                    modules.push_back(a);
                    ++k;
                }
            SweepFamily fam;
            fam.max_degree = 2;
            fam.minpolys.push_back({-RatFunc::T(F), RatFunc::constant(F, 0), RatFunc::constant(F, 1)});  // x^2 - T
            if (q > 2) {
                KPoly m(q, RatFunc::constant(F, 0));  // x^(q-1) + T
                m[0] = RatFunc::T(F);
                m[q - 1] = RatFunc::constant(F, 1);
                fam.minpolys.push_back(m);
            }
            for (std::size_t i = 0; i < modules.size(); ++i) {
                DrinfeldModule phi(F, modules[i]);
                out.push_back({q, i == 0, modules[i], lehmer_sweep(phi, fam)});
            }
        }
        return out;
    }();
    return cases;
}

std::string module_string(const std::vector<RatFunc>& a) {
    std::string s = "T";
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero()) s += " + (" + a[i].to_string() + ")tau" + (i ? "^" + std::to_string(i + 1) : "");
    return s;
}

// S = poles of T and the a_i, zeros of a_r.
bool in_S(const GF& F, const std::vector<RatFunc>& a, const Place& v) {
    bool s = valuation(v, a.back()) > 0 || valuation(v, RatFunc::T(F)) < 0;
    for (const auto& ai : a) s = s || (!ai.is_zero() && valuation(v, ai) < 0);
    return s;
}

std::vector<Place> poles_of(const GF& F, const RatFunc& alpha) {
    std::vector<Place> poles = prime_divisors(alpha.den());
    if (alpha.num().degree() > alpha.den().degree()) poles.push_back(Place::infinite(F));
    return poles;
}

// True when some pole of alpha (in K) is covered by the parts of the proof that do not twist:
// a pole outside S, or v(alpha) < M_v with v(a_r) <= 0.
bool proof_covers(const GF& F, const std::vector<RatFunc>& a, const RatFunc& alpha) {
    const long r = static_cast<long>(a.size());
    for (const auto& v : poles_of(F, alpha)) {
        long va = valuation(v, alpha), var = valuation(v, a.back());
        if (!in_S(F, a, v)) return true;
        BigRational M;
        bool first = true;
        for (long i = 0; i < r; ++i) {
            const RatFunc& ai = i == 0 ? RatFunc::T(F) : a[static_cast<std::size_t>(i - 1)];
            if (ai.is_zero()) continue;
            BigRational m = BigRational(valuation(v, ai) - var) / (pow_q(F, r) - pow_q(F, i));
            if (first || m < M) M = m;
            first = false;
        }
        if (va < M && var <= 0) return true;
    }
    return false;
}

Outcome pole_case() {
    Outcome o;
    long rows = 0, pole_rows = 0, unresolved = 0, violations = 0, covered_violations = 0, ext_violations = 0;
    std::string example;
    for (const auto& c : sweep_corpus()) {
        const GF& F = GF::make(c.q, 1);
        for (const auto& r : c.rows) {
            ++rows;
            if (!r.pole_case || r.torsion == "true") continue;
            ++pole_rows;
            // decided from the certified lower bound (capped places count as 0) or the exact value
            if (r.violation == "unknown") {
                ++unresolved;
                continue;
            }
            if (r.violation == "false") continue;
            ++violations;
            if (!r.minpoly.empty()) {
                ++ext_violations;
                continue;
            }
            RatFunc alpha = R(F, r.alpha);
            if (proof_covers(F, c.a, alpha)) ++covered_violations;
            if (example.empty() && c.a.size() == 1) {
                // Independent check: h(phi_{T^n}(alpha)) / q^n from the definition.
                RatFunc x = alpha;
                std::string est;
                for (int n = 1; n <= 3; ++n) {
                    x = apply_T_direct(F, c.a, x);
                    est += (n > 1 ? ", " : "") + to_fraction_string(BigRational(x.height()) / pow_q(F, n));
                }
                example = "q=" + std::to_string(c.q) + ", phi_T = " + module_string(c.a) + ", alpha = " + r.alpha +
                          ": d*hhat = " + to_fraction_string(r.d_times_hhat) + " (direct h(phi_{T^n}alpha)/q^n, n=1..3: " + est + ")";
            }
        }
    }
    o.pass = violations == 0 && unresolved == 0;
    std::ostringstream d;
    d << pole_rows << " non-torsion pole-case rows of " << rows << ", " << unresolved << " unresolved, " << violations
      << " with d*hhat < 1";
    if (violations) {
        d << "; every violation has all poles of alpha at zeros of a_r (the twist steps of the argument): "
          << (covered_violations == 0 && ext_violations == 0 ? "yes" : "NO") << "; e.g. " << example;
        o.documented = covered_violations == 0 && ext_violations == 0 && unresolved == 0;
    }
    o.detail = d.str();
    return o;
}

Outcome constant_case() {
    Outcome o;
    o.pass = false;
    std::ostringstream d;
    int flagged = 0;
    for (const auto& c : sweep_corpus()) {
        if (c.q < 3 || !c.carlitz) continue;
        for (const auto& r : c.rows) {
            if (r.alpha != "1" || !r.minpoly.empty()) continue;
            bool ok = r.violation == "true" && r.d_times_hhat == make_rational(1, c.q) && !r.pole_case;
            flagged += ok;
            d << "Carlitz q=" << c.q << " alpha=1: d*hhat=" << to_fraction_string(r.d_times_hhat) << " violation=" << r.violation << "; ";
        }
    }
    o.pass = flagged == 2;
    o.detail = d.str();
    return o;
}

// ---------------------------------------------------------------- 4
Outcome torsion() {
    Outcome o;
    std::ostringstream d;
    for (std::uint32_t q : {3u, 5u}) {
        const GF& F = GF::make(q, 1);
        KPoly m(q, RatFunc::constant(F, 0));
        m[0] = RatFunc::T(F);
        m[q - 1] = RatFunc::constant(F, 1);
        auto L = ExtField::make(F, m);
        DrinfeldModule phi = DrinfeldModule::carlitz(F).over(L);
        ExtElem x = ExtElem::generator(*L);
        HeightResult h = global_height(phi, x);
        TorsionResult t = is_torsion(phi, x, 8);
        // Oracle: T x + x^q = x (T + x^(q-1)) = 0 in L.
        ExtElem direct = ExtElem(*L, RatFunc::T(F)) * x + x.pow(q);
        bool ok = h.value == 0 && t.status == TorsionStatus::Torsion && direct.is_zero() && phi.eval(Poly::x(F), x).is_zero();
        o.pass = o.pass && ok;
        d << "q=" << q << ": hhat=" << to_fraction_string(h.value) << " " << to_string(h.status) << ", certificate " << t.certificate()
          << "; ";
    }
    Rng rng(4);
    int good = 0, tried = 0;
    while (tried < 20) {
        std::uint32_t q = std::vector<std::uint32_t>{2, 3, 5}[static_cast<std::size_t>(tried % 3)];
        const GF& F = GF::make(q, 1);
        std::vector<RatFunc> a = {RatFunc(random_poly(F, rng, 1, true))};
        RatFunc al = random_ratfunc(F, rng, 2);
        // Non-torsion by the direct argument: at a pole v outside S, v(phi_{T^n}(alpha)) = q^n v(alpha).
        auto ps = poles_of(F, al);
        if (std::none_of(ps.begin(), ps.end(), [&](const Place& v) { return !in_S(F, a, v); })) continue;
        ++tried;
        DrinfeldModule phi(F, a);
        ExtElem alpha(phi.ext(), al);
        HeightResult h = global_height(phi, alpha);
        TorsionResult t = is_torsion(phi, alpha, 8);
        bool ok = h.status == HeightStatus::Exact && h.value > 0 && t.status == TorsionStatus::NonTorsion;
        good += ok;
        if (!ok)
            d << "[q=" << q << " phi=" << phi.to_string() << " alpha=" << al.to_string() << ": " << to_string(h.status) << " hhat in ["
              << to_fraction_string(h.lower) << ", " << to_fraction_string(h.value) << "], " << t.certificate() << "] ";
    }
    o.pass = o.pass && good == 20;
    d << good << "/20 random alpha with a pole outside S: Exact hhat > 0 and non-torsion";
    o.detail = d.str();
    return o;
}

// ---------------------------------------------------------------- 5
Outcome decomposition() {
    Outcome o;
    Rng rng(55);
    int compared = 0, bracketed = 0, skipped = 0;
    BigRational worst;
    for (int it = 0; compared < 50 && it < 400; ++it) {
        std::uint32_t q = std::vector<std::uint32_t>{2, 3, 5}[static_cast<std::size_t>(it % 3)];
        const GF& F = GF::make(q, 1);
        int r = 1 + (it / 3) % 2;
        std::vector<RatFunc> a;
        for (int i = 1; i <= r; ++i) a.emplace_back(random_poly(F, rng, 1, i == r));
        DrinfeldModule phi(F, a);
        ExtElem alpha(phi.ext(), random_ratfunc(F, rng, 2));
        HeightResult h = global_height(phi, alpha);
        if (h.status != HeightStatus::Exact) continue;
        // enough terms that deg phi_{T^n}(alpha) stays near q^(nr) <= 4^7
        int nmax = 1;
        while (std::pow(static_cast<double>(q), r * (nmax + 1)) <= 16384.0) ++nmax;
        auto est = naive_height_estimate(phi, alpha, nmax);
        // converged: the last two estimates of the budget agree to within the tolerance
        std::size_t n = est.size() - 1;
        if (abs(est[n] - est[n - 1]) >= kDecompTol) {
            ++skipped;
            continue;
        }
        ++compared;
        BigRational lo = est[n] < est[n - 1] ? est[n] : est[n - 1], hi = est[n] < est[n - 1] ? est[n - 1] : est[n];
        BigRational off = h.value < lo ? lo - h.value : (h.value > hi ? h.value - hi : BigRational(0));
        if (off > worst) worst = off;
        bracketed += off <= kDecompTol;
    }
    o.pass = compared == 50 && bracketed == 50;
    o.detail = std::to_string(bracketed) + "/" + std::to_string(compared) + " local sums inside [min,max] of the converged estimates +- 1/1000 (largest gap " +
               to_decimal_string(worst, 6) + "); " + std::to_string(skipped) + " draws did not converge within the term budget";
    return o;
}

// ---------------------------------------------------------------- 6
Outcome ec_profile() {
    Outcome o;
    const GF& F = GF::make(5, 1);
    ECurve E(R(F, "t"), R(F, "1"));
    CurveProfile p = curve_profile(E);
    SzpiroRow s = szpiro_check(E);
    o.pass = p.d_EK == 12 && p.deg_j == 3 && p.f_EK == 5 && !p.semistable && s.lhs == 12 && s.rhs == 18 && s.szpiro == Verdict::Pass;
    o.detail = "d=" + std::to_string(p.d_EK) + " deg_j=" + std::to_string(p.deg_j) + " f=" + std::to_string(p.f_EK) +
               (p.semistable ? " semistable" : " non-semistable") + ", Szpiro " + std::to_string(s.lhs) + " <= " + std::to_string(s.rhs) + " " +
               to_string(s.szpiro);
    return o;
}

// ---------------------------------------------------------------- 7-10
std::vector<GeneratedCurve>& ec_corpus() {
    static std::vector<GeneratedCurve> curves = [] {
        std::vector<GeneratedCurve> out;
        Rng rng(31337);
        for (int i = 0; i < 10; ++i) out.push_back(generate_curve(GF::make(i < 6 ? 5 : 7, 1), rng, i % 2 == 0));
        return out;
    }();
    return curves;
}

std::vector<ECPoint> random_points(const ECurve& E, std::vector<ECPoint> gens, Rng& rng, int count) {
    if (gens.size() > 3) gens.erase(gens.begin(), gens.end() - 3);
    std::vector<ECPoint> out;
    std::uniform_int_distribution<int> c(-3, 3);
    for (int guard = 0; static_cast<int>(out.size()) < count && guard < 50 * count; ++guard) {
        ECPoint P = ECPoint::identity();
        for (const auto& g : gens) P = ec_add(E, P, ec_mul(E, g, c(rng)));
        if (P.inf || torsion_order(E, P)) continue;
        out.push_back(P);
    }
    return out;
}

std::vector<ECPoint> corpus_points(const GeneratedCurve& g) {
    auto pts = point_search(g.E, 2);
    pts.push_back(g.P);
    return pts;
}

Outcome census() {
    Outcome o;
    std::ostringstream d;
    long max_count = 0, max_tors = 0, borderline = 0;
    for (const auto& g : ec_corpus()) {
        Census c = small_height_census(g.E, g.E.semistable(), kWidth);
        auto tors = torsion_group(g.E);
        bool excess = c.count > 24 || tors.size() > 24;
        if (excess) d << "EXCESS on " << g.E.to_string() << "; ";
        o.pass = o.pass && !excess;
        max_count = std::max(max_count, c.count);
        max_tors = std::max<long>(max_tors, static_cast<long>(tors.size()));
        borderline += static_cast<long>(c.borderline.size());
    }
    d << "10 curves (5 semistable, 5 general; q=5,7): max census count " << max_count << ", max #torsion " << max_tors << ", "
      << borderline << " borderline entries";
    o.detail = d.str();
    return o;
}

Outcome lang() {
    Outcome o;
    long rows = 0, fails = 0, inconclusive = 0;
    BigRational min_ratio;
    bool first = true;
    for (const auto& g : ec_corpus()) {
        for (const auto& row : lehmer_lang_check(g.E, corpus_points(g))) {
            ++rows;
            fails += row.verdict == Verdict::Fail;
            inconclusive += row.verdict == Verdict::Inconclusive;
            if (row.verdict == Verdict::Pass) {
                BigRational ratio = row.h.lo / row.bound;
                if (first || ratio < min_ratio) min_ratio = ratio;
                first = false;
            }
        }
    }
    o.pass = rows > 0 && fails == 0 && static_cast<double>(inconclusive) <= kLangInconclusiveShare * static_cast<double>(rows);
    o.detail = std::to_string(rows) + " non-torsion points, " + std::to_string(fails) + " below bound/60000, " + std::to_string(inconclusive) +
               " inconclusive; smallest lo(hhat)/(bound/60000) = " + (first ? std::string("-") : to_decimal_string(min_ratio, 2));
    return o;
}

bool overlaps(const BigRational& a0, const BigRational& a1, const BigRational& b0, const BigRational& b1) { return !(a1 < b0 || b1 < a0); }

Outcome height_machine() {
    Outcome o;
    Rng rng(909);
    long pairs = 0, para = 0, scal = 0, scal_n = 0, ce = 0, ce_n = 0, exact_para = 0;
    for (const auto& g : ec_corpus()) {
        const ECurve& E = g.E;
        auto gens = corpus_points(g);
        auto db = doubling_bounds(E);
        for (const auto& P : random_points(E, gens, rng, 100)) {
            BigRational d = naive_height_x(E, ec_double(E, P)) - 4 * naive_height_x(E, P);
            ++ce_n;
            ce += db.L <= d && d <= db.U;
        }
        auto rp = random_points(E, gens, rng, 50);
        for (std::size_t i = 0; i + 1 < rp.size(); i += 2) {
            const auto &P = rp[i], &Q = rp[i + 1];
            auto hP = canonical_height(E, P, kWidth), hQ = canonical_height(E, Q, kWidth);
            ECPoint S = ec_add(E, P, Q), D = ec_add(E, P, ec_neg(Q));
            auto hS = canonical_height(E, S, kWidth), hD = canonical_height(E, D, kWidth);
            ++pairs;
            para += overlaps(hS.lo + hD.lo, hS.hi + hD.hi, 2 * (hP.lo + hQ.lo), 2 * (hP.hi + hQ.hi));
            // exact local-height sums satisfy the law with equality
            exact_para += exact_height(E, S, false) + exact_height(E, D, false) == 2 * exact_height(E, P, false) + 2 * exact_height(E, Q, false);
            for (long n = 2; n <= 3; ++n) {
                auto hn = canonical_height(E, ec_mul(E, P, n), kWidth);
                ++scal_n;
                scal += overlaps(hn.lo, hn.hi, n * n * hP.lo, n * n * hP.hi);
            }
        }
    }
    o.pass = pairs == 250 && para == pairs && scal == scal_n && ce == ce_n && ce_n == 1000;
    o.detail = "parallelogram " + std::to_string(para) + "/" + std::to_string(pairs) + " pairs (exact equality " + std::to_string(exact_para) +
               "), n^2 scaling " + std::to_string(scal) + "/" + std::to_string(scal_n) + ", C_E sound " + std::to_string(ce) + "/" +
               std::to_string(ce_n) + " points";
    return o;
}

Outcome integral_points() {
    Outcome o;
    std::ostringstream d;
    long curves = 0, complete = 0, points = 0, semi_checked = 0, gen_na = 0;
    BigRational worst_eps;
    std::vector<std::pair<ECurve, std::vector<Place>>> jobs;
    {
        const GF& F = GF::make(5, 1);
        jobs.push_back({ECurve(R(F, "t"), R(F, "t")), {Place::infinite(F), Place::finite(R(F, "t+1").num())}});
    }
    for (const auto& g : ec_corpus()) {
        std::vector<Place> S = {Place::infinite(g.E.field())};
        for (const auto& ld : g.E.local_data())
            if (!ld.place.is_infinite() && ld.type != Reduction::Good) {
                S.push_back(ld.place);
                break;
            }
        jobs.push_back({g.E, S});
    }
    for (const auto& [E, S] : jobs) {
        IntegralReport r = integral_points_census(E, S, std::nullopt);
        ++curves;
        complete += r.complete;
        points += static_cast<long>(r.points.size());
        bool ok = r.epsilon_verdict == Verdict::Pass && r.verdict_semistable != Verdict::Fail && r.verdict_semistable != Verdict::Inconclusive &&
                  r.verdict_general != Verdict::Fail && r.verdict_general != Verdict::Inconclusive;
        semi_checked += r.verdict_semistable == Verdict::Pass;
        gen_na += r.verdict_general == Verdict::NotApplicable;
        if (r.epsilon_bound > 0) {
            BigRational share = r.epsilon_observed / r.epsilon_bound;
            if (share > worst_eps) worst_eps = share;
        }
        if (!ok) d << "FAILED on " << E.to_string() << "; ";
        o.pass = o.pass && ok;
    }
    d << curves << " curves, " << points << " points of E(R_S) found (" << complete << " searches complete, the rest capped); semistable bound PASS on "
      << semi_checked << "; general bound not applicable (g = 0) on " << gen_na << "; max eps_observed/eps_bound = " << to_decimal_string(worst_eps, 4);
    o.detail = d.str();
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> all = {
        {1, "Carlitz exactness", carlitz_exactness},
        {2, "pole case d*hhat >= 1", pole_case},
        {3, "constant-case violation flagged", constant_case},
        {4, "torsion", torsion},
        {5, "decomposition vs naive limit", decomposition},
        {6, "EC profile of y^2 = x^3 + tx + 1", ec_profile},
        {7, "census and torsion <= 24", census},
        {8, "Lang constant 1/60000", lang},
        {9, "height-machine properties", height_machine},
        {10, "integral points and epsilon bound", integral_points},
    };
    int unexpected = 0;
    for (const auto& c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d: %s  %s%s -- %s [%.1fs]\n", c.id, o.pass ? "PASS" : "FAIL", c.title,
                    !o.pass && o.documented ? " (documented finding)" : "", o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass && !o.documented) ++unexpected;
    }
    return unexpected ? 1 : 0;
}
