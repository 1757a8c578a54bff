#include "sts/bigint.hpp"

#include <stdexcept>

namespace sts {

BigInt factorial(unsigned n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

BigInt from_u64(std::uint64_t x) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(x), 0, 0, &x);
  return r;
}

std::string to_string(const BigInt& x) { return x.get_str(10); }

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str(10);
  return c.get_num().get_str(10) + "/" + c.get_den().get_str(10);
}

std::string with_commas(const BigInt& x) {
  std::string digits = BigInt(abs(x)).get_str(10);
  std::string out;
  int lead = static_cast<int>(digits.size()) % 3;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i != 0 && (static_cast<int>(i) - lead) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return x < 0 ? "-" + out : out;
}

BigInt parse_bigint(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ',' && c != '_' && c != ' ') s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  BigInt r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed integer: " + std::string(text));
  return r;
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(text));
  BigInt num = parse_bigint(text.substr(0, slash));
  BigInt den = parse_bigint(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
  Rational q(num, den);
  q.canonicalize();
  return q;
}

bool is_integer(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_den() == 1;
}

}  // namespace sts
