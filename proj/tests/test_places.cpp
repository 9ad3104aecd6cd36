#include "doctest.h"

#include "fheight/error.hpp"
#include "fheight/expr.hpp"
#include "fheight/place.hpp"

using namespace fheight;

namespace {

RatFunc R(const GF& f, const char* s) { return parse_ratfunc(f, s); }

RatFunc random_ratfunc(const GF& F, Rng& rng, int maxdeg) {
    std::uniform_int_distribution<std::uint64_t> d(0, F.size() - 1);
    std::uniform_int_distribution<int> dg(0, maxdeg);
    auto rp = [&]() {
        std::vector<Elt> c(static_cast<std::size_t>(dg(rng)) + 1);
        for (auto& x : c) x = static_cast<Elt>(d(rng));
        return Poly(F, c);
    };
    Poly n = rp(), m = rp();
    while (m.is_zero()) m = rp();
    return RatFunc(n, m);
}

}  // namespace

TEST_CASE("valuations on K") {
    const GF& F5 = GF::make(5, 1);
    CHECK(valuation(Place::infinite(F5), RatFunc::T(F5)) == -1);
    CHECK(valuation(Place::finite(parse_poly(F5, "T")), R(F5, "(T^2+T)/(T+2)")) == 1);
    CHECK(valuation(Place::finite(parse_poly(F5, "T+1")), RatFunc(F5)) == kInfVal);
    CHECK(valuation(Place::infinite(F5), RatFunc(F5)) == kInfVal);
}

TEST_CASE("height on K") {
    const GF& F5 = GF::make(5, 1);
    CHECK(height_K(RatFunc::T(F5)) == 1);
    CHECK(height_K(R(F5, "(T^3+1)/(T+2)")) == 3);
    CHECK(height_K(RatFunc::constant(F5, 3)) == 0);
    Rng rng(5);
    for (int it = 0; it < 100; ++it) {
        RatFunc a = random_ratfunc(F5, rng, 5);
        CHECK(height_K(a) == height_K_by_places(a));
    }
}

TEST_CASE("product formula on K") {
    Rng rng(17);
    for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}, {3, 2}}) {
        const GF& F = GF::make(p, n);
        for (int it = 0; it < 40; ++it) {
            RatFunc a = random_ratfunc(F, rng, 6);
            if (a.is_zero()) continue;
            long s = 0;
            for (const auto& w : support(a)) s += w.degree() * valuation(w, a);
            CHECK(s == 0);
        }
    }
}

TEST_CASE("Newton polygons") {
    auto a = newton_polygon({{0, 1}, {2, 0}});
    REQUIRE(a.segments.size() == 1);
    CHECK(a.segments[0].slope == make_rational(-1, 2));
    CHECK(a.segments[0].length == 2);
    auto b = newton_polygon({{0, 0}, {2, 0}});
    REQUIRE(b.segments.size() == 1);
    CHECK(b.segments[0].slope == 0);
    CHECK(b.segments[0].length == 2);
    auto c = newton_polygon({{0, 1}, {1, 1}, {3, 0}});
    REQUIRE(c.segments.size() == 1);
    CHECK(c.segments[0].slope == make_rational(-1, 3));
    CHECK(c.segments[0].length == 3);
    auto d = newton_polygon({{0, 3}, {1, 0}, {2, 0}, {3, 1}});
    REQUIRE(d.segments.size() == 3);
    CHECK(d.segments[0].slope == -3);
    CHECK(d.segments[1].slope == 0);
    CHECK(d.segments[2].slope == 1);
    CHECK_THROWS_AS(newton_polygon({{0, kInfVal}, {1, 2}}), Error);
}

TEST_CASE("completion series realize the valuation") {
    const GF& F3 = GF::make(3, 1);
    Place w = Place::finite(parse_poly(F3, "T^2+1"));
    const CompletionK& C = completion(w);
    CHECK(C.residue_field().size() == 9);
    Laurent s = C.series(w.pi(), 12);
    CHECK(s.valuation() == 1);
    CHECK(s.c.size() == 1);
    CHECK(s.c[0] == 1);
    RatFunc a = R(F3, "(T^2+1)^2*(T+1)/((T^2+1)^3*T)");
    CHECK(C.series(a, 10).valuation() == valuation(w, a));
    // multiplicativity of the embedding
    RatFunc b = R(F3, "(T^3+2*T+1)/(T^4+T)");
    Laurent lhs = C.series(a * b, 10);
    Laurent rhs = (C.series(a, 10) * C.series(b, 10)).truncated(10);
    Laurent diff = (lhs - rhs);
    CHECK(diff.no_terms());
}
