#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "fheight/error.hpp"
#include "fheight/ratfunc.hpp"

namespace fheight {

struct SourcePos {
    int line = 1;
    int col = 1;
};

[[noreturn]] inline void parse_error(SourcePos pos, const std::string& msg) {
    throw Error(ErrorKind::Parse, std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + msg);
}

/// Recursive-descent parser for the element grammar:
///   expr  := term (('+'|'-') term)*
///   term  := unary (('*'|'/')? unary)*      juxtaposition multiplies
///   unary := '-' unary | power
///   power := atom ('^' '-'? integer)?
///   atom  := integer | identifier | '(' expr ')'
/// Ctx supplies literal(long long), ident(name, pos), pow(v, e, pos), div(a, b, pos).
template <class V, class Ctx>
class ExprParser {
public:
    ExprParser(std::string_view text, const Ctx& ctx) : s_(text), ctx_(ctx) {}

    V parse() {
        skip();
        if (i_ >= s_.size()) parse_error(pos(), "empty expression");
        V v = expr();
        skip();
        if (i_ < s_.size()) parse_error(pos(), std::string("unexpected '") + s_[i_] + "'");
        return v;
    }

private:
    SourcePos pos() const {
        SourcePos p;
        for (std::size_t k = 0; k < i_ && k < s_.size(); ++k) {
            if (s_[k] == '\n') {
                ++p.line;
                p.col = 1;
            } else {
                ++p.col;
            }
        }
        return p;
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool peek(char c) {
        skip();
        return i_ < s_.size() && s_[i_] == c;
    }
    bool starts_atom() {
        skip();
        if (i_ >= s_.size()) return false;
        char c = s_[i_];
        return c == '(' || std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    V expr() {
        V v = term();
        for (;;) {
            if (peek('+')) {
                ++i_;
                v = v + term();
            } else if (peek('-')) {
                ++i_;
                v = v - term();
            } else {
                return v;
            }
        }
    }
    V term() {
        V v = unary();
        for (;;) {
            if (peek('*')) {
                ++i_;
                v = v * unary();
            } else if (peek('/')) {
                ++i_;
                SourcePos p = pos();
                v = ctx_.div(v, unary(), p);
            } else if (starts_atom()) {
                v = v * power();
            } else {
                return v;
            }
        }
    }
    V unary() {
        if (peek('-')) {
            ++i_;
            return -unary();
        }
        if (peek('+')) {
            ++i_;
            return unary();
        }
        return power();
    }
    V power() {
        V base = atom();
        if (peek('^')) {
            ++i_;
            SourcePos p = pos();
            bool neg = false;
            if (peek('-')) {
                ++i_;
                neg = true;
            }
            skip();
            if (i_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_]))) parse_error(pos(), "expected integer exponent");
            long long e = integer();
            return ctx_.pow(base, neg ? -e : e, p);
        }
        return base;
    }
    long long integer() {
        long long v = 0;
        SourcePos p = pos();
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            if (v > (1ll << 55)) parse_error(p, "integer literal too large");
            v = v * 10 + (s_[i_] - '0');
            ++i_;
        }
        return v;
    }
    V atom() {
        skip();
        if (i_ >= s_.size()) parse_error(pos(), "unexpected end of input");
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            V v = expr();
            if (!peek(')')) parse_error(pos(), "expected ')'");
            ++i_;
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return ctx_.literal(integer());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            SourcePos p = pos();
            std::size_t start = i_;
            while (i_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
            return ctx_.ident(s_.substr(start, i_ - start), p);
        }
        parse_error(pos(), std::string("unexpected '") + c + "'");
    }

    std::string_view s_;
    const Ctx& ctx_;
    std::size_t i_ = 0;
};

/// Parse an element of F_q(T); identifiers: u, T/t.
RatFunc parse_ratfunc(const GF& f, std::string_view text);
/// Parse a polynomial over F_q in T (division by constants allowed).
Poly parse_poly(const GF& f, std::string_view text);
/// Polynomial in `var` with coefficients in K, e.g. "T + (T^2+1)*tau^2" or "x^2 - T".
/// The product is read commutatively, so coefficients may sit on either side of var.
std::vector<RatFunc> parse_var_poly(const GF& f, std::string_view text, std::string_view var);

}  // namespace fheight
