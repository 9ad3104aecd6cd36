#include "doctest.h"

#include <map>

#include "fheight/error.hpp"
#include "fheight/expr.hpp"
#include "fheight/ext_places.hpp"

using namespace fheight;

namespace {

ExtFieldPtr ext(const GF& F, std::vector<const char*> coeffs) {
    KPoly m;
    for (auto c : coeffs) m.push_back(parse_ratfunc(F, c));
    return ExtField::make(F, m);
}

ExtElem random_elem(const ExtField& L, Rng& rng) {
    const GF& F = L.field();
    std::uniform_int_distribution<std::uint64_t> d(0, F.size() - 1);
    std::uniform_int_distribution<int> dg(0, 2);
    std::vector<RatFunc> c;
    for (int i = 0; i < L.degree(); ++i) {
        auto rp = [&](bool nonzero) {
            for (;;) {
                std::vector<Elt> v(static_cast<std::size_t>(dg(rng)) + 1);
                for (auto& x : v) x = static_cast<Elt>(d(rng));
                Poly p(F, v);
                if (!nonzero || !p.is_zero()) return p;
            }
        };
        c.push_back(RatFunc(rp(false), rp(true)));
    }
    return ExtElem(L, c);
}

std::vector<Place> small_places(const GF& F) {
    std::vector<Place> out{Place::infinite(F)};
    for (Elt a = 0; a < F.size() && a < 5; ++a) out.push_back(Place::finite(Poly(F, {F.neg(a), 1})));
    return out;
}

}  // namespace

TEST_CASE("places above: ramified, inert, split") {
    const GF& F5 = GF::make(5, 1);
    auto L = ext(F5, {"-T", "0", "1"});
    Place w0 = Place::finite(parse_poly(F5, "T"));
    auto vs = places_above(*L, w0);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].e == 2);
    CHECK(vs[0].f_res == 1);
    ExtElem x = ExtElem::generator(*L);
    CHECK(valuation_ext(vs[0], x) == 1);
    CHECK(valuation_ext(vs[0], RatFunc::T(F5)) == 2);
    CHECK(valuation_ext(vs[0], ExtElem(*L)) == kInfVal);
    CHECK(height_L(x) == make_rational(1, 2));
    CHECK(height_L(ExtElem(*L, parse_ratfunc(F5, "(T^3+1)/(T+2)"))) == 3);
    CHECK(height_L(ExtElem(*L, RatFunc::constant(F5, 3))) == 0);

    auto In = ext(F5, {"-2", "0", "1"});  // 2 is not a square mod 5
    auto vi = places_above(*In, Place::finite(parse_poly(F5, "T-1")));
    REQUIRE(vi.size() == 1);
    CHECK(vi[0].e == 1);
    CHECK(vi[0].f_res == 2);
    CHECK(vi[0].d_v == 2);

    const GF& F9 = GF::make(3, 2);
    Elt ns = 0;
    for (Elt a = 1; a < 9; ++a)
        if (!F9.is_square(a)) {
            ns = a;
            break;
        }
    auto In9 = ExtField::make(F9, {RatFunc::constant(F9, F9.neg(ns)), RatFunc(F9), RatFunc::constant(F9, 1)});
    auto vi9 = places_above(*In9, Place::finite(parse_poly(F9, "T-1")));
    REQUIRE(vi9.size() == 1);
    CHECK(vi9[0].f_res == 2);

    auto Sp = ext(F5, {"-(T^2+1)", "0", "1"});
    auto vs2 = places_above(*Sp, w0);
    REQUIRE(vs2.size() == 2);
    for (const auto& v : vs2) {
        CHECK(v.e == 1);
        CHECK(v.f_res == 1);
    }
}

TEST_CASE("reducible minimal polynomials are rejected") {
    const GF& F5 = GF::make(5, 1);
    CHECK_THROWS_AS(ext(F5, {"-T^2", "0", "1"}), Error);
    CHECK_THROWS_AS(ext(F5, {"-(T+1)^2*T^2", "0", "1"}), Error);
    CHECK_THROWS_AS(ext(F5, {"T^2", "2*T", "1"}), Error);
    const GF& F2 = GF::make(2, 1);
    CHECK_THROWS_AS(ext(F2, {"T^2", "0", "1"}), Error);
}

TEST_CASE("wild ramification is reported") {
    const GF& F4 = GF::make(2, 2);
    auto L = ExtField::make(F4, {RatFunc::T(F4), RatFunc::constant(F4, 1), RatFunc::constant(F4, 1)});
    try {
        places_above(*L, Place::infinite(F4));
        FAIL("expected UnsupportedRamification");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnsupportedRamification);
        CHECK(std::string(e.what()).find("Z+1") != std::string::npos);
    }
}

TEST_CASE("local degree sums, restriction and product formula") {
    struct Case {
        std::uint32_t p, n;
        std::vector<const char*> m;
    };
    std::vector<Case> cases = {
        {5, 1, {"-T", "0", "1"}},
        {5, 1, {"T", "0", "0", "0", "1"}},       // x^4 + T  (x^{q-1}+T)
        {3, 1, {"T", "0", "1"}},                 // x^2 + T
        {2, 1, {"-T", "0", "1"}},                // inseparable x^2 - T
        {3, 1, {"-T", "0", "0", "1"}},           // inseparable x^3 - T
        {5, 1, {"-T", "0", "0", "1"}},           // x^3 - T, q = 2 mod 3
        {2, 2, {"T", "0", "0", "1"}},            // x^{q-1}+T over F_4
        {7, 1, {"T^2+1", "T", "0", "1"}},
        {5, 1, {"-(T^3+T)/(T+1)", "1/T", "1"}},
        {3, 2, {"u*T+1", "0", "1"}},
    };
    Rng rng(99);
    for (const auto& cs : cases) {
        const GF& F = GF::make(cs.p, cs.n);
        auto L = ext(F, cs.m);
        INFO("minpoly " << L->minpoly_string());
        auto ws = merge_places(small_places(F), minpoly_support(*L));
        for (const auto& w : ws) {
            auto vs = places_above(*L, w);
            long total = 0;
            for (const auto& v : vs) total += v.e * v.f_res;
            CHECK(total == L->degree());
            RatFunc a = parse_ratfunc(F, "(T^2+T+1)/T^3");
            for (const auto& v : vs) CHECK(valuation_ext(v, ExtElem(*L, a)) == v.e * valuation(w, a));
        }
        int checked = 0;
        for (int it = 0; it < 12 && checked < 5; ++it) {
            ExtElem b = random_elem(*L, rng);
            if (b.is_zero()) continue;
            ExtElem bi = b.inv();
            CHECK((b * bi) == ExtElem(*L, RatFunc::constant(F, 1)));
            auto sup = minpoly_support(*L);
            for (const auto& c : b.coeffs()) sup = merge_places(sup, poles(c));
            for (const auto& c : bi.coeffs()) sup = merge_places(sup, poles(c));
            long s = 0;
            try {
                for (const auto& v : places_above_all(*L, sup)) s += v.d_v * valuation_ext(v, b);
            } catch (const Error& e) {
                // residue fields beyond the table limit are out of reach
                if (e.kind() == ErrorKind::FieldTooLarge) continue;
                throw;
            }
            CHECK(s == 0);
            ++checked;
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("Newton polygon matches the places above") {
    const GF& F5 = GF::make(5, 1);
    for (auto m : std::vector<std::vector<const char*>>{{"T", "T", "0", "1"}, {"T^3", "T", "1/T", "1"}, {"-T", "0", "1"}}) {
        auto L = ext(F5, m);
        for (const auto& w : small_places(F5)) {
            std::vector<std::pair<long, long>> pts;
            for (std::size_t i = 0; i < L->minpoly().size(); ++i) pts.emplace_back(static_cast<long>(i), valuation(w, L->minpoly()[i]));
            auto np = newton_polygon(pts);
            std::map<BigRational, long> expect, got;
            for (const auto& s : np.segments) expect[-s.slope] += s.length;
            ExtElem x = ExtElem::generator(*L);
            for (const auto& v : places_above(*L, w)) got[make_rational(valuation_ext(v, x), v.e)] += v.e * v.f_res;
            CHECK(expect == got);
        }
    }
}
