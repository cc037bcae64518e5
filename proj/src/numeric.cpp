#include "inducibility/numeric.hpp"

#include <stdexcept>

namespace inducibility {

BigInt binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

BigInt binomial(const BigInt& n, long k) {
  if (k < 0 || n < k) return 0;
  BigInt r;
  mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(k));
  return r;
}

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string decimal_string(const Rational& value, int digits) {
  if (value < 0) return "-" + decimal_string(Rational(-value), digits);
  BigInt pow10 = 1;
  for (int i = 0; i < digits; ++i) pow10 *= 10;
  BigInt num = value.get_num() * pow10;
  const BigInt& den = value.get_den();
  BigInt q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  BigInt twice = 2 * r;
  if (twice > den || (twice == den && mpz_odd_p(q.get_mpz_t()))) q += 1;

  BigInt ip = q / pow10;
  BigInt fp = q % pow10;
  std::string frac = fp.get_str();
  frac.insert(frac.begin(), static_cast<size_t>(digits) - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  std::string out = ip.get_str();
  if (!frac.empty()) out += "." + frac;
  return out;
}

}  // namespace inducibility
