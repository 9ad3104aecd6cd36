#include "fheight/ext_places.hpp"

#include <algorithm>

#include "fheight/error.hpp"

namespace fheight {

namespace {

struct State {
    const GF* k;
    FieldEmbedding iota;  // k_w -> k
    Elt C;
    long E;
    std::vector<Laurent> G;  // polynomial in y with series coefficients
    Laurent base, scl;       // x = base + scl * y
};

struct Run {
    const GF* kw;
    long N;
    bool at_cap;
    std::vector<ExtBranch>* out;
};

// s*a - t*b = 1 for coprime a, b (b >= 1).
void bezout(long a, long b, long& s, long& t) {
    long old_r = a, r = b, old_x = 1, x = 0, old_y = 0, y = 1;
    while (r != 0) {
        long q = old_r / r;
        long tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_x - q * x;
        old_x = x;
        x = tmp;
        tmp = old_y - q * y;
        old_y = y;
        y = tmp;
    }
    // a*old_x + b*old_y = old_r = +-1
    if (old_r < 0) {
        old_x = -old_x;
        old_y = -old_y;
    }
    s = old_x;
    t = -old_y;
}

void emit(const State& st, const Laurent& x, const Run& run) {
    ExtBranch b;
    b.k = st.k;
    b.iota = st.iota;
    b.C = st.C;
    b.E = st.E;
    b.f_res = st.k->degree() / run.kw->degree();
    b.x = x;
    run.out->push_back(std::move(b));
}

std::vector<Laurent> taylor_shift(std::vector<Laurent> D, Elt y0) {
    // D(y) -> D(y0 + y)
    std::size_t n = D.size();
    if (y0 == 0) return D;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = n - 1; j-- > i;) D[j] = D[j] + scale(D[j + 1], y0);
    return D;
}

void process(State st, bool top, const Run& run) {
    const std::uint32_t p = st.k->characteristic();
    long rel = run.N * st.E;
    // roots equal to zero
    while (st.G.size() > 1 && st.G[0].no_terms()) {
        if (!st.G[0].is_exact() && !run.at_cap) throw PrecisionNeeded{st.G[0].prec};
        emit(st, st.base, run);
        st.G.erase(st.G.begin());
    }
    if (st.G.size() < 2) return;

    std::vector<std::pair<long, long>> pts;
    std::vector<std::size_t> unknown;
    for (std::size_t i = 0; i < st.G.size(); ++i) {
        if (!st.G[i].no_terms()) pts.emplace_back(static_cast<long>(i), st.G[i].val);
        else if (!st.G[i].is_exact()) unknown.push_back(i);
    }
    if (!st.G.back().no_terms() && pts.size() < 2) return;
    NewtonPolygon np = newton_polygon(pts);
    for (std::size_t i : unknown) {
        for (const auto& s : np.segments) {
            long li = static_cast<long>(i);
            if (li < s.start || li > s.start + s.length) continue;
            BigRational line = BigRational(s.start_value) + s.slope * BigRational(li - s.start);
            if (BigRational(st.G[i].prec) <= line) throw PrecisionNeeded{st.G[i].prec};
        }
    }

    for (const auto& seg : np.segments) {
        long a = -seg.slope.get_num().get_si();
        long b = seg.slope.get_den().get_si();
        if (!top && a <= 0) continue;
        std::vector<Elt> rc;
        for (long j = 0; j * b <= seg.length; ++j) {
            long i = seg.start + j * b;
            long expected = seg.start_value - j * a;
            rc.push_back(st.G[static_cast<std::size_t>(i)].coeff(expected));
        }
        Poly R(*st.k, rc);
        for (const auto& fc : factor(R)) {
            if (b % static_cast<long>(p) == 0)
                throw Error(ErrorKind::UnsupportedRamification,
                            "residual polynomial " + R.to_string("Z") + " needs ramification index divisible by p");
            const GF& k2 = GF::make(p, st.k->degree() * static_cast<std::uint32_t>(fc.poly.degree()));
            FieldEmbedding j = FieldEmbedding::find(st.k, &k2);
            Elt z0 = roots(fc.poly.map(j)).front();
            long s, t;
            bezout(a, b, s, t);
            Elt c = k2.pow(z0, BigInt(-s));
            Elt y0 = k2.pow(z0, BigInt(-t));
            auto sub = [&](const Laurent& L) { return substitute(L, j, c, b); };

            State nx;
            nx.k = &k2;
            nx.iota = st.iota.then(j);
            nx.C = k2.mul(j(st.C), k2.pow(c, static_cast<std::uint64_t>(st.E)));
            nx.E = st.E * b;
            Laurent sb = sub(st.scl);
            nx.scl = shift(sb, a);
            nx.base = sub(st.base) + scale(nx.scl, y0);
            long nrel = run.N * nx.E;
            std::vector<Laurent> H(st.G.size());
            for (std::size_t i = 0; i < st.G.size(); ++i) H[i] = shift(sub(st.G[i]), a * static_cast<long>(i)).truncated(nrel);
            std::vector<Laurent> D = taylor_shift(std::move(H), y0);
            long V = LONG_MAX;
            for (const auto& d : D)
                if (!d.no_terms()) V = std::min(V, d.val);
            for (auto& d : D) d = shift(d, -V).truncated(nrel);
            nx.G = std::move(D);

            if (fc.mult == 1) {
                std::vector<Laurent> Dp(nx.G.size() - 1);
                for (std::size_t i = 1; i < nx.G.size(); ++i) Dp[i - 1] = scale(nx.G[i], k2.from_int(static_cast<long long>(i)));
                Laurent y1(k2);
                for (int it = 0; it < 200; ++it) {
                    Laurent g = horner(nx.G, y1, nrel);
                    if (g.no_terms()) break;
                    Laurent gp = horner(Dp, y1, nrel);
                    if (gp.valuation() != 0) throw PrecisionNeeded{gp.prec};
                    Laurent delta = divide(g, gp, nrel);
                    if (delta.valuation() <= 0) throw PrecisionNeeded{delta.prec};
                    y1 = y1 - delta;
                }
                Laurent x = (nx.base + nx.scl * y1).truncated(nrel);
                emit(nx, x, run);
            } else {
                process(std::move(nx), false, run);
            }
        }
        (void)rel;
    }
}

std::vector<ExtBranch> compute_branches(const ExtField& L, const Place& w, long N) {
    const CompletionK& Kw = completion(w);
    const GF& kw = Kw.residue_field();
    State st;
    st.k = &kw;
    st.iota = FieldEmbedding::identity(&kw);
    st.C = 1;
    st.E = 1;
    for (const auto& c : L.separable_part()) st.G.push_back(Kw.series(c, N));
    st.base = Laurent(kw);
    st.scl = Laurent::constant(kw, 1);
    std::vector<ExtBranch> out;
    Run run{&kw, N, N >= kInitialPrecision * kPrecisionCapFactor, &out};
    process(std::move(st), true, run);

    long total = 0;
    for (const auto& b : out) total += b.E * b.f_res;
    long dsep = static_cast<long>(L.separable_part().size()) - 1;
    if (total != dsep) {
        if (run.at_cap)
            throw Error(ErrorKind::PrecisionExhausted, "local degrees at " + w.to_string() + " sum to " + std::to_string(total));
        throw PrecisionNeeded{N};
    }
    unsigned k = L.inseparable_exponent();
    if (k > 0) {
        long pk = 1;
        for (unsigned i = 0; i < k; ++i) pk *= kw.characteristic();
        for (auto& b : out) {
            b.x = inseparable_root(b.x, k);
            b.E *= pk;
        }
    }
    return out;
}

}  // namespace

const std::vector<ExtBranch>& ExtField::branches(const Place& w, long N) const {
    auto key = std::make_pair(w.to_string(), N);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return *it->second;
    }
    auto data = std::make_unique<std::vector<ExtBranch>>(compute_branches(*this, w, N));
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
    auto& ref = *data;
    cache_.emplace(key, std::move(data));
    return ref;
}

std::string PlaceOfExt::to_string() const { return below.to_string(); }

std::vector<PlaceOfExt> places_above(const ExtField& L, const Place& w) {
    const auto& br = with_precision([&](long N) -> const std::vector<ExtBranch>& { return L.branches(w, N); });
    std::vector<PlaceOfExt> out;
    for (std::size_t i = 0; i < br.size(); ++i) {
        PlaceOfExt v;
        v.L = &L;
        v.below = w;
        v.e = br[i].E;
        v.f_res = br[i].f_res;
        v.d_v = w.degree() * br[i].f_res;
        v.branch = static_cast<int>(i);
        out.push_back(v);
    }
    return out;
}

const ExtBranch& branch_data(const PlaceOfExt& v, long N) {
    const auto& br = v.L->branches(v.below, N);
    if (static_cast<std::size_t>(v.branch) >= br.size()) throw PrecisionNeeded{N};
    return br[static_cast<std::size_t>(v.branch)];
}

Laurent base_series(const PlaceOfExt& v, const RatFunc& a, long N) {
    const ExtBranch& b = branch_data(v, N);
    return substitute(completion(v.below).series(a, N), b.iota, b.C, b.E);
}

Laurent ext_series(const PlaceOfExt& v, const ExtElem& beta, long N) {
    const ExtBranch& b = branch_data(v, N);
    long rel = N * b.E;
    std::vector<Laurent> cs;
    for (const auto& c : beta.coeffs()) cs.push_back(base_series(v, c, N));
    while (cs.size() > 1 && cs.back().is_exact_zero()) cs.pop_back();
    return horner(cs, b.x, rel);
}

long valuation_ext(const PlaceOfExt& v, const RatFunc& a) {
    long w = valuation(v.below, a);
    return w == kInfVal ? kInfVal : v.e * w;
}

long valuation_ext(const PlaceOfExt& v, const ExtElem& beta) {
    if (beta.is_zero()) return kInfVal;
    if (beta.in_base()) return valuation_ext(v, beta.base_value());
    return with_precision([&](long N) { return ext_series(v, beta, N).valuation(); });
}

std::vector<Place> minpoly_support(const ExtField& L) {
    std::vector<Place> out{Place::infinite(L.field())};
    for (const auto& c : L.minpoly()) out = merge_places(out, poles(c));
    return out;
}

std::vector<PlaceOfExt> places_above_all(const ExtField& L, const std::vector<Place>& ws) {
    std::vector<PlaceOfExt> out;
    for (const auto& w : ws) {
        auto vs = places_above(L, w);
        out.insert(out.end(), vs.begin(), vs.end());
    }
    return out;
}

BigRational height_L(const ExtElem& beta) {
    if (beta.is_zero()) return 0;
    const ExtField& L = beta.ext();
    if (beta.in_base()) return height_K(beta.base_value());
    std::vector<Place> ws = minpoly_support(L);
    for (const auto& c : beta.coeffs()) ws = merge_places(ws, poles(c));
    long s = 0;
    for (const auto& v : places_above_all(L, ws)) {
        long val = valuation_ext(v, beta);
        if (val < 0) s += v.d_v * -val;
    }
    return make_rational(s, L.degree());
}

}  // namespace fheight
