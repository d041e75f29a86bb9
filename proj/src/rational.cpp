#include "mlelim/rational.hpp"

#include <cctype>

#include "mlelim/errors.hpp"

namespace mlelim {

BigRational::BigRational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DivisionFailure("zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

BigRational BigRational::parse(std::string_view text) {
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    neg = text[i] == '-';
    ++i;
  }
  auto digits = [&](std::size_t start) {
    std::size_t j = start;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j == start) throw SyntaxError("expected digits", start);
    return j;
  };
  std::size_t end = digits(i);
  BigInt num(std::string(text.substr(i, end - i)));
  BigInt den = 1;
  if (end < text.size()) {
    if (text[end] != '/') throw SyntaxError("unexpected character in rational", end);
    std::size_t dend = digits(end + 1);
    if (dend != text.size()) throw SyntaxError("trailing characters in rational", dend);
    den = BigInt(std::string(text.substr(end + 1, dend - end - 1)));
    if (den == 0) throw SyntaxError("zero denominator", end + 1);
  }
  if (neg) num = -num;
  return BigRational(num, den);
}

BigRational& BigRational::operator/=(const BigRational& o) {
  if (o.is_zero()) throw DivisionFailure("division by zero rational");
  q_ /= o.q_;
  return *this;
}

BigRational BigRational::pow(unsigned k) const {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), q_.get_num_mpz_t(), k);
  mpz_pow_ui(d.get_mpz_t(), q_.get_den_mpz_t(), k);
  return BigRational(n, d);
}

BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace mlelim
