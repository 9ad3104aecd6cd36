#include "fheight/rational.hpp"

#include "fheight/error.hpp"

namespace fheight {

BigRational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            if (auto e = text.find_first_of("eE"); e != std::string::npos) {
                // "1e-4" style widths
                BigRational mant = parse_rational(text.substr(0, e));
                long ex = std::stol(text.substr(e + 1));
                BigInt ten = ipow(BigInt(10), static_cast<unsigned long>(ex < 0 ? -ex : ex));
                return ex < 0 ? BigRational(mant / ten) : BigRational(mant * ten);
            }
            if (auto dot = text.find('.'); dot != std::string::npos) {
                std::string digits = text.substr(0, dot) + text.substr(dot + 1);
                BigInt num(digits);
                BigInt den = ipow(BigInt(10), text.size() - dot - 1);
                return make_rational(num, den);
            }
            return BigRational(BigInt(text));
        }
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw Error(ErrorKind::DivisionByZero, "rational with zero denominator: " + text);
        return make_rational(num, den);
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::Parse, "not a rational number: '" + text + "'");
    }
}

BigInt ipow(const BigInt& base, unsigned long exp) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

std::string to_decimal_string(const BigRational& r, int digits) {
    BigInt scale = ipow(BigInt(10), static_cast<unsigned long>(digits));
    BigRational scaled = r * scale;
    BigInt q;
    // round half away from zero
    BigRational half(1, 2);
    BigRational adj = scaled >= 0 ? BigRational(scaled + half) : BigRational(scaled - half);
    mpz_tdiv_q(q.get_mpz_t(), adj.get_num_mpz_t(), adj.get_den_mpz_t());
    bool neg = q < 0;
    if (neg) q = -q;
    std::string s = q.get_str();
    if (static_cast<int>(s.size()) <= digits) s = std::string(digits + 1 - s.size(), '0') + s;
    s.insert(s.size() - digits, ".");
    return neg ? "-" + s : s;
}

}  // namespace fheight
