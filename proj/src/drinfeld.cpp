#include "fheight/drinfeld.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <sstream>

#include "fheight/error.hpp"

namespace fheight {

namespace {

BigInt qpow(const GF& f, long e) { return ipow(f.size_big(), static_cast<unsigned long>(e)); }

void require_same_field(const DrinfeldModule& phi, const ExtElem& a) {
    if (&a.ext() != &phi.ext()) throw Error(ErrorKind::InvalidArgument, "element and module live in different fields");
}

}  // namespace

DrinfeldModule::DrinfeldModule(const GF& f, std::vector<RatFunc> a) : L_(ExtField::base(f)) {
    if (a.empty() || a.back().is_zero()) throw Error(ErrorKind::InvalidArgument, "leading coefficient a_r must be nonzero");
    a_.push_back(ExtElem(*L_, RatFunc::T(f)));
    for (auto& c : a) a_.push_back(ExtElem(*L_, c));
}

DrinfeldModule::DrinfeldModule(ExtFieldPtr L, std::vector<ExtElem> a) : L_(std::move(L)) {
    if (a.empty() || a.back().is_zero()) throw Error(ErrorKind::InvalidArgument, "leading coefficient a_r must be nonzero");
    a_.push_back(ExtElem(*L_, RatFunc::T(L_->field())));
    for (auto& c : a) {
        if (&c.ext() != L_.get()) throw Error(ErrorKind::InvalidArgument, "coefficient from a different field");
        a_.push_back(c);
    }
}

DrinfeldModule DrinfeldModule::carlitz(const GF& f) { return DrinfeldModule(f, {RatFunc::constant(f, 1)}); }

DrinfeldModule DrinfeldModule::over(ExtFieldPtr L) const {
    if (L.get() == L_.get()) return *this;
    std::vector<ExtElem> b;
    for (int i = 1; i <= rank(); ++i) {
        if (!a(i).in_base()) throw Error(ErrorKind::InvalidArgument, "cannot move coefficients outside K");
        b.push_back(ExtElem(*L, a(i).base_value()));
    }
    return DrinfeldModule(L, b);
}

TwistedPoly<ExtElem> DrinfeldModule::phi_T() const { return TwistedPoly<ExtElem>(a_); }

TwistedPoly<ExtElem> DrinfeldModule::phi(const Poly& g) const {
    TwistedPoly<ExtElem> acc;
    TwistedPoly<ExtElem> pw({ExtElem(*L_, RatFunc::constant(field(), 1))});
    TwistedPoly<ExtElem> t = phi_T();
    for (std::size_t j = 0; j < g.coeffs().size(); ++j) {
        if (j) pw = t * pw;
        if (g[j]) acc = acc + TwistedPoly<ExtElem>({ExtElem(*L_, RatFunc::constant(field(), g[j]))}) * pw;
    }
    return acc;
}

ExtElem DrinfeldModule::apply_T(const ExtElem& x) const {
    ExtElem acc = x * a_[0];
    ExtElem xp = x;
    for (int i = 1; i <= rank(); ++i) {
        xp = xp.frobenius_q(1);
        if (!a_[static_cast<std::size_t>(i)].is_zero()) acc = acc + a_[static_cast<std::size_t>(i)] * xp;
    }
    return acc;
}

ExtElem DrinfeldModule::eval(const Poly& g, const ExtElem& x) const {
    ExtElem acc(*L_);
    ExtElem y = x;
    for (std::size_t j = 0; j < g.coeffs().size(); ++j) {
        if (j) y = apply_T(y);
        if (g[j]) acc = acc + y.scale(RatFunc::constant(field(), g[j]));
    }
    return acc;
}

std::string DrinfeldModule::to_string() const {
    return phi_T().to_string([](const ExtElem& e) { return e.to_string(); });
}

Thresholds thresholds(const DrinfeldModule& phi, const PlaceOfExt& v) {
    Thresholds th;
    int r = phi.rank();
    const GF& f = phi.field();
    th.v_T = valuation_ext(v, RatFunc::T(f));
    for (int i = 1; i <= r; ++i) th.v_a.push_back(valuation_ext(v, phi.a(i)));
    long var = th.v_a.back();
    BigInt qr = qpow(f, r);
    bool have = false;
    for (int i = 0; i < r; ++i) {
        long vi = i == 0 ? th.v_T : th.v_a[static_cast<std::size_t>(i - 1)];
        if (vi == kInfVal) continue;
        BigRational m = BigRational(BigInt(vi - var)) / BigRational(qr - qpow(f, i));
        m.canonicalize();
        if (!have || m < th.M) th.M = m;
        have = true;
    }
    BigRational lead = BigRational(BigInt(-var)) / BigRational(qr - 1);
    lead.canonicalize();
    th.D = std::min(th.M, lead);
    th.bad = th.v_T < 0 || var > 0;
    for (long x : th.v_a)
        if (x != kInfVal && x < 0) th.bad = true;
    return th;
}

const char* to_string(HeightStatus s) {
    switch (s) {
        case HeightStatus::Exact: return "Exact";
        case HeightStatus::CertifiedZero: return "CertifiedZero";
        case HeightStatus::CapExceeded: return "CapExceeded";
    }
    return "?";
}

namespace {

struct LostAt {
    int step;
};

}  // namespace

LocalHeight local_height(const DrinfeldModule& phi, const PlaceOfExt& v, const ExtElem& alpha, int cap) {
    require_same_field(phi, alpha);
    LocalHeight out;
    out.place = v;
    out.value = 0;
    out.status = HeightStatus::CertifiedZero;
    if (alpha.is_zero()) return out;

    const GF& f = phi.field();
    const int r = phi.rank();
    Thresholds th = thresholds(phi, v);
    long va = valuation_ext(v, alpha);
    bool integral = va >= 0 && th.v_T >= 0;
    for (long x : th.v_a)
        if (x < 0) integral = false;
    if (integral) return out;

    const BigInt qr = qpow(f, r);
    const BigRational weight = make_rational(v.d_v, phi.ext().degree());
    const BigRational lead_term = BigRational(BigInt(th.v_a.back())) / BigRational(qr - 1);
    auto exact = [&](int n, long vn) {
        BigRational val = -weight * (BigRational(BigInt(vn)) + lead_term) / BigRational(ipow(qr, static_cast<unsigned long>(n)));
        val.canonicalize();
        out.value = val;
        out.status = HeightStatus::Exact;
        out.iterations = n;
        return out;
    };
    if (BigRational(BigInt(va)) < th.D) return exact(0, va);

    const unsigned fdeg = f.degree();
    ExtElem seed = alpha;
    int seed_at = 0;
    const long cap_prec = kInitialPrecision * kPrecisionCapFactor;
    for (long N = kInitialPrecision;;) {
        try {
            const ExtBranch& br = branch_data(v, N);
            long rel = N * br.E;
            Laurent b = ext_series(v, seed, N);
            if (b.no_terms()) throw LostAt{seed_at};
            Laurent Ts = base_series(v, RatFunc::T(f), N);
            std::vector<Laurent> as;
            for (int i = 1; i <= r; ++i) as.push_back(ext_series(v, phi.a(i), N));
            // Zero certificate: a ball W^c O with phi_T(W^c O) inside W^c O keeps the orbit bounded.
            // With x = W^c u, phi_T(x) = sum_i b_i u^(q^i), b_0 = T W^c, b_i = a_i W^(c q^i). As u^(q^i) = u^(q^j) mod W
            // when i = j mod f (k = F_(q^f)), it suffices that each class sum of b_i has v >= c and that
            // v(b_i) + 1 >= c for all but the least index of each class.
            const long fk = static_cast<long>(br.k->degree() / fdeg);
            std::map<long, bool> ball_memo;
            auto invariant_ball = [&](long c) {
                auto it = ball_memo.find(c);
                if (it != ball_memo.end()) return it->second;
                std::vector<Laurent> bs = {shift(Ts, c)};
                BigInt qi(1);
                for (int i = 1; i <= r; ++i) {
                    qi *= f.size_big();
                    bs.push_back(shift(as[static_cast<std::size_t>(i - 1)], c * qi.get_si()));
                }
                bool ok = true;
                for (long j = 0; j < fk && ok; ++j) {
                    Laurent sum(f);
                    bool any = false;
                    for (long i = j; i <= r; i += fk) {
                        const Laurent& bi = bs[static_cast<std::size_t>(i)];
                        if (bi.is_exact_zero()) continue;
                        sum = any ? sum + bi : bi;
                        if (any && bi.valuation_bound() + 1 < c) ok = false;
                        any = true;
                    }
                    if (any && sum.valuation_bound() < c) ok = false;
                }
                return ball_memo[c] = ok;
            };
            const long cD = -floor_to_int(-th.D).get_si();
            auto certified_zero = [&](const Laurent& x, int at) {
                for (long c = cD; c <= std::min(x.val, cD + 16); ++c) {
                    if (!invariant_ball(c)) continue;
                    out.value = 0;
                    out.status = HeightStatus::CertifiedZero;
                    out.iterations = at;
                    return true;
                }
                return false;
            };
            if (certified_zero(b, seed_at)) return out;
            for (int m = seed_at; m < cap; ++m) {
                Laurent nb = (Ts * b).truncated(rel);
                for (int i = 1; i <= r; ++i) {
                    const Laurent& ai = as[static_cast<std::size_t>(i - 1)];
                    if (ai.is_exact_zero()) continue;
                    nb = nb + (ai * frobenius_power(b, fdeg * static_cast<unsigned>(i))).truncated(rel);
                }
                nb = nb.truncated(rel);
                if (nb.no_terms()) throw LostAt{m + 1};
                long vn = nb.val;
                if (BigRational(BigInt(vn)) < th.D) return exact(m + 1, vn);
                if (certified_zero(nb, m + 1)) return out;
                b = std::move(nb);
            }
            out.status = HeightStatus::CapExceeded;
            out.iterations = cap;
            // Every later iterate starts from v >= ceil(D); the first one to drop below D has
            // v >= m1, after which the exact formula applies.
            long m1 = th.v_T + cD;
            for (int i = 1; i <= r; ++i) {
                long vai = th.v_a[static_cast<std::size_t>(i - 1)];
                if (vai == kInfVal) continue;
                m1 = std::min(m1, vai + qpow(f, i).get_si() * cD);
            }
            BigRational top = -(BigRational(BigInt(m1)) + lead_term);
            if (top < 0) top = 0;
            BigRational bound = top * weight / BigRational(ipow(qr, static_cast<unsigned long>(cap + 1)));
            bound.canonicalize();
            out.value = bound;
            return out;
        } catch (const PrecisionNeeded&) {
            if (N >= cap_prec) throw Error(ErrorKind::PrecisionExhausted, "local height at " + v.to_string());
            N *= 2;
        } catch (const LostAt& lost) {
            if (N < cap_prec) {
                N *= 2;
                continue;
            }
            if (lost.step <= seed_at) throw Error(ErrorKind::PrecisionExhausted, "local height at " + v.to_string());
            // the iterate is v-adically tiny: look at it globally
            ExtElem g = seed;
            for (int m = seed_at; m < lost.step; ++m) g = phi.apply_T(g);
            if (g.is_zero()) {
                out.value = 0;
                out.status = HeightStatus::CertifiedZero;
                out.iterations = lost.step;
                return out;
            }
            long vg = valuation_ext(v, g);
            if (BigRational(BigInt(vg)) < th.D) return exact(lost.step, vg);
            seed = g;
            seed_at = lost.step;
            N = kInitialPrecision;
        }
    }
}

std::vector<Place> height_support(const DrinfeldModule& phi, const ExtElem& alpha) {
    std::vector<Place> ws = minpoly_support(phi.ext());
    for (const auto& c : alpha.coeffs()) ws = merge_places(ws, poles(c));
    for (int i = 1; i <= phi.rank(); ++i)
        for (const auto& c : phi.a(i).coeffs()) ws = merge_places(ws, poles(c));
    return ws;
}

HeightResult global_height(const DrinfeldModule& phi, const ExtElem& alpha, const HeightOptions& opt) {
    require_same_field(phi, alpha);
    HeightResult res;
    res.value = 0;
    auto vs = places_above_all(phi.ext(), height_support(phi, alpha));
    if (opt.parallel && vs.size() > 1) {
        std::vector<std::future<LocalHeight>> fs;
        for (const auto& v : vs) fs.push_back(std::async(std::launch::async, [&, v] { return local_height(phi, v, alpha, opt.cap); }));
        for (auto& fu : fs) res.per_place.push_back(fu.get());
    } else {
        for (const auto& v : vs) res.per_place.push_back(local_height(phi, v, alpha, opt.cap));
    }
    bool any_cap = false, all_zero = true;
    for (const auto& lh : res.per_place) {
        res.value += lh.value;
        if (lh.status != HeightStatus::CapExceeded) res.lower += lh.value;
        if (lh.status == HeightStatus::CapExceeded) any_cap = true;
        if (lh.status != HeightStatus::CertifiedZero) all_zero = false;
    }
    res.value.canonicalize();
    res.lower.canonicalize();
    res.status = any_cap ? HeightStatus::CapExceeded : (all_zero ? HeightStatus::CertifiedZero : HeightStatus::Exact);
    return res;
}

std::vector<BigRational> naive_height_estimate(const DrinfeldModule& phi, const ExtElem& alpha, int n_max) {
    require_same_field(phi, alpha);
    std::vector<BigRational> out;
    const BigInt qr = qpow(phi.field(), phi.rank());
    ExtElem b = alpha;
    BigInt den = 1;
    for (int n = 0; n <= n_max; ++n) {
        if (n) {
            b = phi.apply_T(b);
            den *= qr;
        }
        BigRational h = height_L(b) / BigRational(den);
        h.canonicalize();
        out.push_back(h);
    }
    return out;
}

DrinfeldModule twist(const DrinfeldModule& phi0, const ExtElem& xi, TwistData* data) {
    if (xi.is_zero()) throw Error(ErrorKind::DivisionByZero, "twist by zero");
    DrinfeldModule phi = &xi.ext() == &phi0.ext() ? phi0 : phi0.over(xi.ext().shared_from_this());
    require_same_field(phi, xi);
    ExtElem xinv = xi.inv();
    std::vector<ExtElem> b;
    for (int i = 1; i <= phi.rank(); ++i) b.push_back(phi.a(i) * xi.frobenius_q(static_cast<unsigned>(i)) * xinv);
    if (data) {
        data->xi = xi;
        data->b = b;
    }
    return DrinfeldModule(phi.ext_ptr(), b);
}

std::string TorsionResult::certificate() const {
    if (status == TorsionStatus::NonTorsion) return (height_is_lower_bound ? "hhat>=" : "hhat=") + to_fraction_string(height);
    std::string s = "T^" + std::to_string(n);
    if (m >= 0) s += "-T^" + std::to_string(m);
    return s;
}

TorsionResult is_torsion(const DrinfeldModule& phi, const ExtElem& alpha, int degree_bound, int cap) {
    require_same_field(phi, alpha);
    HeightResult h = global_height(phi, alpha, {cap, false});
    if (h.status == HeightStatus::Exact && h.value > 0) return {TorsionStatus::NonTorsion, 0, 0, h.value};
    // Local heights are non-negative, so the uncapped places alone can certify a positive height.
    if (h.lower > 0) return {TorsionStatus::NonTorsion, 0, 0, h.lower, true};
    std::vector<ExtElem> orbit;
    ExtElem b = alpha;
    for (int n = 0; n <= degree_bound; ++n) {
        if (n) b = phi.apply_T(b);
        if (b.is_zero()) return {TorsionStatus::Torsion, n, -1, 0};
        for (int m = 0; m < n; ++m)
            if (orbit[static_cast<std::size_t>(m)] == b) return {TorsionStatus::Torsion, n, m, 0};
        orbit.push_back(b);
        if (b.coeff_height() > 4096) break;
    }
    throw Error(ErrorKind::Inconclusive, "orbit of " + alpha.to_string() + " neither repeats nor has certified positive height");
}

long deg_A(const Poly& a) {
    if (a.is_zero()) throw Error(ErrorKind::InvalidArgument, "deg of zero");
    return -1 * valuation(Place::infinite(a.field()), a);
}

namespace {

std::vector<Poly> polys_up_to(const GF& F, int deg, bool monic) {
    std::vector<Poly> out;
    for (int d = 0; d <= deg; ++d) {
        std::uint64_t total = 1;
        for (int i = 0; i < d + (monic ? 0 : 1); ++i) total *= F.size();
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::vector<Elt> c(static_cast<std::size_t>(d) + 1, 0);
            std::uint64_t t = idx;
            for (int i = 0; i < d; ++i) {
                c[static_cast<std::size_t>(i)] = static_cast<Elt>(t % F.size());
                t /= F.size();
            }
            if (monic) {
                c[static_cast<std::size_t>(d)] = 1;
            } else {
                c[static_cast<std::size_t>(d)] = static_cast<Elt>(t % F.size());
                if (c[static_cast<std::size_t>(d)] == 0) continue;
            }
            out.emplace_back(F, c);
        }
    }
    return out;
}

SweepRow sweep_one(const DrinfeldModule& phi, const ExtElem& alpha, const std::string& alpha_s, const std::string& minpoly_s,
                   int d, int cap, int torsion_bound) {
    SweepRow row;
    row.alpha = alpha_s;
    row.minpoly = minpoly_s;
    row.d = d;
    row.torsion = "unknown";
    row.violation = "unknown";
    row.hhat = 0;
    row.d_times_hhat = 0;
    try {
        row.pole_case = height_L(alpha) > 0;
        HeightResult h = global_height(phi, alpha, {cap, false});
        row.hhat = h.value;
        row.hhat_lower = h.lower;
        row.status = to_string(h.status);
        if (h.lower > 0) {
            row.torsion = "false";
        } else {
            try {
                TorsionResult t = is_torsion(phi, alpha, torsion_bound, cap);
                row.torsion = t.status == TorsionStatus::Torsion ? "true" : "false";
                if (t.status == TorsionStatus::Torsion) {
                    row.hhat = 0;
                    row.hhat_lower = 0;
                    if (h.status == HeightStatus::CapExceeded) row.status = "CertifiedZero";
                }
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::Inconclusive) throw;
            }
        }
        row.d_times_hhat = row.hhat * d;
        if (row.torsion == "true") row.violation = "false";
        else if (row.torsion == "false") {
            // the bound is decided once the lower bound clears it or the upper bound misses it
            if (row.hhat_lower * d >= 1) row.violation = "false";
            else if (row.status == "Exact" || row.d_times_hhat < 1) row.violation = "true";
        }
    } catch (const Error& e) {
        row.status = to_string(e.kind());
    }
    return row;
}

}  // namespace

std::vector<SweepRow> lehmer_sweep(const DrinfeldModule& phi0, const SweepFamily& family, int cap, int torsion_bound) {
    const GF& F = phi0.field();
    std::vector<SweepRow> rows;
    auto K = ExtField::base(F);
    DrinfeldModule phi = phi0.over(K);
    std::vector<RatFunc> alphas;
    auto nums = polys_up_to(F, family.max_degree, false);
    auto dens = polys_up_to(F, family.max_degree, true);
    for (const auto& den : dens)
        for (const auto& num : nums) {
            if (!gcd(num, den).is_one()) continue;
            RatFunc a(num, den);
            if (!family.include_constants && a.is_constant()) continue;
            alphas.push_back(a);
        }
    std::sort(alphas.begin(), alphas.end(), ratfunc_less);
    for (const auto& a : alphas) rows.push_back(sweep_one(phi, ExtElem(*K, a), a.to_string(), "", 1, cap, torsion_bound));
    for (const auto& m : family.minpolys) {
        ExtFieldPtr L;
        try {
            L = ExtField::make(F, m);
        } catch (const Error& e) {
            SweepRow row;
            row.alpha = "x";
            row.minpoly = kpoly_to_string(m);
            row.d = static_cast<int>(m.size()) - 1;
            row.torsion = "unknown";
            row.violation = "unknown";
            row.status = to_string(e.kind());
            rows.push_back(row);
            continue;
        }
        DrinfeldModule phiL = phi.over(L);
        rows.push_back(sweep_one(phiL, ExtElem::generator(*L), "x", L->minpoly_string(), L->degree(), cap, torsion_bound));
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    auto q = [](const std::string& s) {
        if (s.find_first_of(",\"") == std::string::npos) return s;
        std::string o = "\"";
        for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
        return o + "\"";
    };
    std::ostringstream os;
    os << "alpha,minpoly,d,torsion,hhat_num,hhat_den,d_times_hhat,pole_case,status,violation\n";
    for (const auto& r : rows) {
        os << q(r.alpha) << ',' << q(r.minpoly) << ',' << r.d << ',' << r.torsion << ',' << r.hhat.get_num().get_str() << ','
           << r.hhat.get_den().get_str() << ',' << to_fraction_string(r.d_times_hhat) << ',' << (r.pole_case ? "true" : "false") << ','
           << r.status << ',' << r.violation << '\n';
    }
    return os.str();
}

}  // namespace fheight
