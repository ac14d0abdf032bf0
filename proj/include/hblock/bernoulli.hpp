#pragma once

#include "hblock/rational.hpp"

namespace hblock {

// Bernoulli number B_n with B_1 = -1/2.
Rational bernoulli_number(int n);

// B_n(x) = sum_k binom(n, k) B_k x^(n-k).
Rational bernoulli_poly(int n, const Rational& x);

Rational factorial(int n);

}  // namespace hblock
