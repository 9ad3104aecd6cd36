#include "fheight/expr.hpp"

namespace fheight {

namespace {

struct RatCtx {
    const GF& f;
    RatFunc literal(long long v) const { return RatFunc::constant(f, f.from_int(v)); }
    RatFunc ident(std::string_view name, SourcePos p) const {
        if (name == "T" || name == "t") return RatFunc::T(f);
        if (name == "u") {
            if (f.is_prime_field()) parse_error(p, "'u' is not defined over a prime field");
            return RatFunc::constant(f, f.generator());
        }
        parse_error(p, "unknown identifier '" + std::string(name) + "'");
    }
    RatFunc pow(const RatFunc& b, long long e, SourcePos p) const {
        if (e < 0 && b.is_zero()) parse_error(p, "negative power of zero");
        return b.pow(e);
    }
    RatFunc div(const RatFunc& a, const RatFunc& b, SourcePos p) const {
        if (b.is_zero()) parse_error(p, "division by zero");
        return a / b;
    }
};

// c_0 + c_1 X + ... over K; division only by elements of K.
struct VarPoly {
    std::vector<RatFunc> c;

    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
    friend VarPoly operator+(VarPoly a, const VarPoly& b) {
        if (a.c.size() < b.c.size()) a.c.resize(b.c.size(), RatFunc::constant(b.c[0].field(), 0));
        for (std::size_t i = 0; i < b.c.size(); ++i) a.c[i] = a.c[i] + b.c[i];
        a.trim();
        return a;
    }
    VarPoly operator-() const {
        VarPoly r = *this;
        for (auto& x : r.c) x = -x;
        return r;
    }
    friend VarPoly operator-(const VarPoly& a, const VarPoly& b) { return a + (-b); }
    friend VarPoly operator*(const VarPoly& a, const VarPoly& b) {
        VarPoly r;
        if (a.c.empty() || b.c.empty()) return r;
        r.c.assign(a.c.size() + b.c.size() - 1, RatFunc::constant(a.c[0].field(), 0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
        r.trim();
        return r;
    }
};

struct VarCtx {
    RatCtx base;
    std::string_view var;
    static VarPoly of(RatFunc a) {
        VarPoly r;
        if (!a.is_zero()) r.c.push_back(std::move(a));
        return r;
    }
    VarPoly literal(long long v) const { return of(base.literal(v)); }
    VarPoly ident(std::string_view name, SourcePos p) const {
        if (name == var) {
            VarPoly r;
            r.c = {RatFunc::constant(base.f, 0), RatFunc::constant(base.f, 1)};
            return r;
        }
        return of(base.ident(name, p));
    }
    VarPoly pow(const VarPoly& b, long long e, SourcePos p) const {
        if (b.c.size() <= 1) return of(base.pow(b.c.empty() ? RatFunc::constant(base.f, 0) : b.c[0], e, p));
        if (e < 0) parse_error(p, "negative power of " + std::string(var));
        VarPoly r = literal(1);
        for (long long i = 0; i < e; ++i) r = r * b;
        return r;
    }
    VarPoly div(const VarPoly& a, const VarPoly& b, SourcePos p) const {
        if (b.c.size() != 1) parse_error(p, b.c.empty() ? "division by zero" : "division by a non-constant in " + std::string(var));
        VarPoly r = a;
        for (auto& x : r.c) x = x / b.c[0];
        return r;
    }
};

}  // namespace

std::vector<RatFunc> parse_var_poly(const GF& f, std::string_view text, std::string_view var) {
    VarCtx ctx{RatCtx{f}, var};
    return ExprParser<VarPoly, VarCtx>(text, ctx).parse().c;
}

RatFunc parse_ratfunc(const GF& f, std::string_view text) {
    RatCtx ctx{f};
    return ExprParser<RatFunc, RatCtx>(text, ctx).parse();
}

Poly parse_poly(const GF& f, std::string_view text) {
    RatFunc r = parse_ratfunc(f, text);
    if (!r.is_polynomial()) parse_error(SourcePos{}, "expected a polynomial, got " + r.to_string());
    return r.num();
}

}  // namespace fheight
