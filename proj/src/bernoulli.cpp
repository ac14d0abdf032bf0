#include "hblock/bernoulli.hpp"

#include <mutex>
#include <stdexcept>
#include <vector>

namespace hblock {

namespace {

Integer binomial(int n, int k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace

Rational bernoulli_number(int n) {
  if (n < 0) throw std::invalid_argument("negative Bernoulli index");
  static std::mutex mu;
  static std::vector<Rational> table{Rational(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<int>(table.size()) <= n) {
    // sum_{k=0}^{m} binom(m+1, k) B_k = 0
    int m = static_cast<int>(table.size());
    Rational s = 0;
    for (int k = 0; k < m; ++k) s += Rational(binomial(m + 1, k)) * table[static_cast<std::size_t>(k)];
    Rational b = -s / Rational(m + 1);
    b.canonicalize();
    table.push_back(b);
  }
  return table[static_cast<std::size_t>(n)];
}

Rational bernoulli_poly(int n, const Rational& x) {
  Rational acc = 0;
  Rational power = 1;
  // Horner-free form: accumulate binom(n, k) B_k x^(n-k) from k = n down to 0.
  for (int k = n; k >= 0; --k) {
    acc += Rational(binomial(n, k)) * bernoulli_number(k) * power;
    power *= x;
  }
  acc.canonicalize();
  return acc;
}

Rational factorial(int n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(r);
}

}  // namespace hblock
