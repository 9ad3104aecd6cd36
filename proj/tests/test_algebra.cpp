#include "doctest.h"

#include <set>

#include "fheight/error.hpp"
#include "fheight/ratfunc.hpp"

using namespace fheight;

namespace {

// Brute force: a monic polynomial over F_p of degree n (n <= 3) is irreducible iff it has no root.
bool has_root_mod_p(const std::vector<std::uint32_t>& m, std::uint32_t p) {
    for (std::uint32_t x = 0; x < p; ++x) {
        std::uint64_t acc = 0;
        for (std::size_t i = m.size(); i-- > 0;) acc = (acc * x + m[i]) % p;
        if (acc == 0) return true;
    }
    return false;
}

Poly P(const GF& f, std::vector<Elt> c) { return Poly(f, std::move(c)); }

Poly product(const std::vector<Factor>& fs, const GF& f) {
    Poly acc = Poly::constant(f, 1);
    for (const auto& fc : fs) acc = acc * pow(fc.poly, static_cast<std::uint64_t>(fc.mult));
    return acc;
}

}  // namespace

TEST_CASE("field construction picks the least irreducible modulus") {
    const GF& f5 = GF::make(5, 1);
    CHECK(f5.modulus() == std::vector<std::uint32_t>{0, 1});
    const GF& f4 = GF::make(2, 2);
    // only monic quadratic over F_2 without a root
    int irreducible = 0;
    for (std::uint32_t c1 = 0; c1 < 2; ++c1)
        for (std::uint32_t c0 = 0; c0 < 2; ++c0)
            if (!has_root_mod_p({c0, c1, 1}, 2)) ++irreducible;
    CHECK(irreducible == 1);
    CHECK(f4.modulus() == std::vector<std::uint32_t>{1, 1, 1});
    CHECK_THROWS_AS(GF::make(4, 1), Error);
    try {
        GF::make(4, 1);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotPrime);
    }
    // F_9: u^2+1 is the least irreducible (u^2 has root 0, u^2+1 has none mod 3)
    CHECK(GF::make(3, 2).modulus() == std::vector<std::uint32_t>{1, 0, 1});
    // F_8: least is u^3+u+1
    CHECK(GF::make(2, 3).modulus() == std::vector<std::uint32_t>{1, 1, 0, 1});
    CHECK(&GF::make(3, 2) == &GF::make(3, 2));
}

TEST_CASE("field axioms on random samples") {
    Rng rng(11);
    for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 1}, {3, 1}, {5, 1}, {2, 2}, {3, 2}, {2, 4}, {5, 3}, {7, 2}, {3, 5}}) {
        const GF& F = GF::make(p, n);
        std::uniform_int_distribution<std::uint64_t> d(0, F.size() - 1);
        for (int it = 0; it < 300; ++it) {
            Elt a = static_cast<Elt>(d(rng)), b = static_cast<Elt>(d(rng)), c = static_cast<Elt>(d(rng));
            CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
            CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
            CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
            CHECK(F.add(a, F.neg(a)) == 0);
            if (a) CHECK(F.mul(a, F.inv(a)) == 1);
            CHECK(F.frobenius_inverse(F.frobenius(a)) == a);
        }
        // multiplication agrees with schoolbook reduction modulo m
        for (int it = 0; it < 100; ++it) {
            Elt a = static_cast<Elt>(d(rng)), b = static_cast<Elt>(d(rng));
            auto da = F.digits(a), db = F.digits(b);
            std::vector<std::uint64_t> prod(2 * n, 0);
            for (std::uint32_t i = 0; i < n; ++i)
                for (std::uint32_t j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + std::uint64_t(da[i]) * db[j]) % p;
            const auto& m = F.modulus();
            for (std::size_t k = 2 * n - 1; k-- > n;)
                for (std::uint32_t i = 0; i < n; ++i) prod[k - n + i] = (prod[k - n + i] + (p - prod[k]) * m[i]) % p;
            std::vector<std::uint32_t> r(n);
            for (std::uint32_t i = 0; i < n; ++i) r[i] = static_cast<std::uint32_t>(prod[i]);
            CHECK(F.mul(a, b) == F.from_digits(r));
        }
    }
}

TEST_CASE("Frobenius is additive and fixes exactly the subfield") {
    for (auto [p, k, base] : std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>{{2, 4, 1}, {2, 4, 2}, {3, 4, 1}, {3, 4, 2}, {3, 2, 1}, {2, 6, 2}, {2, 6, 3}}) {
        const GF& F = GF::make(p, k);
        std::uint64_t fixed = 0;
        for (Elt a = 0; a < F.size(); ++a) {
            if (F.frobenius(a, base) == a) ++fixed;
            for (Elt b = 0; b < F.size(); b += 7) CHECK(F.frobenius(F.add(a, b), base) == F.add(F.frobenius(a, base), F.frobenius(b, base)));
        }
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < base; ++i) q *= p;
        CHECK(fixed == q);
    }
}

TEST_CASE("embeddings are ring homomorphisms") {
    const GF& a = GF::make(2, 2);
    const GF& b = GF::make(2, 4);
    auto e = FieldEmbedding::find(&a, &b);
    for (Elt x = 0; x < 4; ++x)
        for (Elt y = 0; y < 4; ++y) {
            CHECK(e(a.add(x, y)) == b.add(e(x), e(y)));
            CHECK(e(a.mul(x, y)) == b.mul(e(x), e(y)));
        }
    const GF& c = GF::make(2, 8);
    auto e2 = FieldEmbedding::find(&b, &c);
    auto comp = e.then(e2);
    for (Elt x = 0; x < 4; ++x) CHECK(comp(x) == e2(e(x)));
}

TEST_CASE("factorization examples") {
    const GF& F5 = GF::make(5, 1);
    auto fs = factor(P(F5, {1, 0, 1}));
    REQUIRE(fs.size() == 2);
    CHECK(fs[0].poly == P(F5, {2, 1}));
    CHECK(fs[1].poly == P(F5, {3, 1}));
    // brute-force root scan agrees
    std::vector<Elt> rs;
    for (Elt x = 0; x < 5; ++x)
        if ((x * x + 1) % 5 == 0) rs.push_back(x);
    CHECK(roots(P(F5, {1, 0, 1})) == rs);

    Poly irr = P(F5, {2, 0, 1});  // T^2+2: 2 is a non-residue mod 5
    auto fi = factor(irr);
    REQUIRE(fi.size() == 1);
    CHECK(fi[0].poly == irr);
    CHECK(fi[0].mult == 1);

    const GF& F3 = GF::make(3, 1);
    auto fl = factor(P(F3, {0, 2, 0, 1}));  // T^3 - T
    REQUIRE(fl.size() == 3);
    for (Elt a = 0; a < 3; ++a) CHECK(fl[a].poly == P(F3, {F3.neg(a == 0 ? 0 : (a == 1 ? 2 : 1)), 1}));
    CHECK(product(fl, F3) == P(F3, {0, 2, 0, 1}));
}

TEST_CASE("factorization reproduces random inputs") {
    Rng rng(2024);
    for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}, {3, 2}}) {
        const GF& F = GF::make(p, n);
        std::uniform_int_distribution<std::uint64_t> d(0, F.size() - 1);
        std::uniform_int_distribution<int> dg(1, 12);
        for (int it = 0; it < 200; ++it) {
            int deg = dg(rng);
            std::vector<Elt> c(deg + 1);
            for (auto& x : c) x = static_cast<Elt>(d(rng));
            c[deg] = 1 + static_cast<Elt>(d(rng) % (F.size() - 1));
            Poly f(F, c);
            auto fs = factor(f, rng);
            CHECK(product(fs, F).scale(f.lead()) == f);
            for (std::size_t i = 0; i < fs.size(); ++i) {
                CHECK(fs[i].poly.is_monic());
                CHECK(is_irreducible(fs[i].poly));
                if (i) CHECK(poly_less(fs[i - 1].poly, fs[i].poly));
            }
        }
    }
}

TEST_CASE("irreducibility count matches necklace formula") {
    // number of monic irreducibles of degree 4 over F_2 is 3, over F_3 of degree 3 is 8
    auto count = [](const GF& F, int n) {
        int c = 0;
        std::uint64_t total = 1;
        for (int i = 0; i < n; ++i) total *= F.size();
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::vector<Elt> v(n + 1, 0);
            std::uint64_t t = idx;
            for (int i = 0; i < n; ++i) {
                v[i] = static_cast<Elt>(t % F.size());
                t /= F.size();
            }
            v[n] = 1;
            if (is_irreducible(Poly(F, v))) ++c;
        }
        return c;
    };
    CHECK(count(GF::make(2, 1), 4) == 3);
    CHECK(count(GF::make(3, 1), 3) == 8);
    CHECK(count(GF::make(2, 2), 2) == 6);
}

TEST_CASE("rational function normalization") {
    const GF& F5 = GF::make(5, 1);
    RatFunc a(P(F5, {4, 0, 1}), P(F5, {4, 1}));
    CHECK(a.den().is_one());
    CHECK(a.num() == P(F5, {1, 1}));
    RatFunc z(Poly(F5), P(F5, {0, 1}));
    CHECK(z.is_zero());
    CHECK(z.den().is_one());
    RatFunc s(P(F5, {0, 2}), P(F5, {2}));
    CHECK(s == RatFunc::T(F5));
    CHECK_THROWS_AS(RatFunc(P(F5, {1}), Poly(F5)), Error);
    RatFunc b(P(F5, {1, 0, 0, 1}), P(F5, {2, 1}));
    CHECK(b.height() == 3);
    CHECK((b * b.inv()).is_one());
    CHECK((b - b).is_zero());
    CHECK(b.frobenius_q() == b.pow(5));
}
