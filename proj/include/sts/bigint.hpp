#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace sts {

using BigInt = mpz_class;
using Rational = mpq_class;

BigInt factorial(unsigned n);
BigInt from_u64(std::uint64_t x);

std::string to_string(const BigInt& x);
// "p" when the denominator is 1, otherwise "p/q" in lowest terms.
std::string to_string(const Rational& q);
// Decimal with thousands separators, e.g. 14,796,207,517,873,771.
std::string with_commas(const BigInt& x);

BigInt parse_bigint(std::string_view text);
Rational parse_rational(std::string_view text);

bool is_integer(const Rational& q);

}  // namespace sts
