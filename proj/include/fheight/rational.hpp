#pragma once

#include <gmpxx.h>

#include <string>

namespace fheight {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline BigRational make_rational(const BigInt& num, const BigInt& den) {
    BigRational r(num, den);
    r.canonicalize();
    return r;
}

inline BigRational make_rational(long num, long den = 1) {
    return make_rational(BigInt(num), BigInt(den));
}

/// Renders as "num/den" (always with a slash, so consumers can parse uniformly).
inline std::string to_fraction_string(const BigRational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

BigRational parse_rational(const std::string& text);

BigInt ipow(const BigInt& base, unsigned long exp);

inline BigRational floor_rational(const BigRational& r) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return BigRational(q);
}

inline BigInt floor_to_int(const BigRational& r) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

/// Decimal rendering with a fixed number of digits; display only.
std::string to_decimal_string(const BigRational& r, int digits = 6);

}  // namespace fheight
